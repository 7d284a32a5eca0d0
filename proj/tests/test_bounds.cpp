#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "labelrec/bounds.hpp"
#include "labelrec/rng.hpp"

using namespace labelrec;

namespace {

// Independent evaluation of the stage-1 bound in long double with a
// different factoring of the exponent.
long double stage1_reference(long double phi, long double dmax, long double p,
                             long double n) {
  const long double t = 1.0L - 2.0L * p;
  const long double a = 1536.0L * dmax * dmax * dmax * p * (1.0L - p);
  const long double b = 32.0L * t * (1.0L - p) * (phi * phi) * dmax;
  const long double expo = (3.0L * t * t * (phi * phi) * (phi * phi)) / (a + b);
  return 2.0L * n * std::exp(-expo);
}

long double stage2_reference(long double n, long double q) {
  const long double t = 1.0L - 2.0L * q;
  return std::exp(-(n / 2.0L) * t * t);
}

}  // namespace

TEST_CASE("stage-1 bound fixed values and limits") {
  // phi -> 0+ drives the exponent to 0, leaving the 2n prefactor.
  REQUIRE(stage1_failure_bound(1e-9, 5, 0.2, 50) == Catch::Approx(100.0).epsilon(1e-8));
  // p -> 0.5- kills the exponent the same way.
  REQUIRE(stage1_failure_bound(3.0, 5, 0.5 - 1e-12, 50) ==
          Catch::Approx(100.0).epsilon(1e-8));
  // Cross-checked against a high-precision evaluation.
  REQUIRE(stage1_failure_bound(50.0, 99, 0.1, 100) ==
          Catch::Approx(183.552895070027).epsilon(1e-12));

  CHECK_THROWS_AS(stage1_failure_bound(0.0, 5, 0.2, 50), std::invalid_argument);
  CHECK_THROWS_AS(stage1_failure_bound(1.0, 0, 0.2, 50), std::invalid_argument);
  CHECK_THROWS_AS(stage1_failure_bound(1.0, 5, 0.5, 50), std::invalid_argument);
  CHECK_THROWS_AS(stage1_failure_bound(1.0, 5, 0.0, 50), std::invalid_argument);
}

TEST_CASE("stage-2 bound fixed values and limits") {
  REQUIRE(stage2_failure_bound(1, 0.5 - 1e-13) == Catch::Approx(1.0).epsilon(1e-9));
  REQUIRE(stage2_failure_bound(8, 0.25) == Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
  REQUIRE(stage2_failure_bound(50, 0.1) == Catch::Approx(std::exp(-16.0)).epsilon(1e-14));

  CHECK_THROWS_AS(stage2_failure_bound(0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(stage2_failure_bound(10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(stage2_failure_bound(10, 0.5), std::invalid_argument);
}

TEST_CASE("bounds match the independent long-double evaluation") {
  SplitMix64 rng(606);
  for (int rep = 0; rep < 200; ++rep) {
    const double phi = 0.5 + 20.0 * rng.uniform();
    const int dmax = 1 + int(rng.below(40));
    const double p = 0.02 + 0.46 * rng.uniform();
    const int n = 2 + int(rng.below(500));
    const double lib = stage1_failure_bound(phi, dmax, p, n);
    const double ref = double(stage1_reference(phi, dmax, p, n));
    REQUIRE(lib == Catch::Approx(ref).epsilon(1e-12));

    const double q = 0.02 + 0.46 * rng.uniform();
    const double lib2 = stage2_failure_bound(n, q);
    const double ref2 = double(stage2_reference(n, q));
    REQUIRE(lib2 == Catch::Approx(ref2).epsilon(1e-12));
  }
}

TEST_CASE("bound monotonicity") {
  SECTION("decreasing in phi") {
    double prev = 1e300;
    for (double phi = 0.5; phi <= 16.0; phi += 0.5) {
      const double v = stage1_failure_bound(phi, 6, 0.15, 64);
      REQUIRE(v < prev);
      prev = v;
    }
  }
  SECTION("increasing in p") {
    double prev = 0.0;
    for (double p = 0.02; p < 0.5; p += 0.02) {
      const double v = stage1_failure_bound(4.0, 6, p, 64);
      REQUIRE(v > prev);
      prev = v;
    }
  }
  SECTION("stage-2 decreasing in n and in distance from q = 0.5") {
    double prev = 1.0;
    for (int n = 10; n <= 200; n += 10) {
      const double v = stage2_failure_bound(n, 0.2);
      REQUIRE(v < prev);
      prev = v;
    }
    prev = 0.0;
    for (double q = 0.05; q < 0.5; q += 0.05) {
      const double v = stage2_failure_bound(30, q);
      REQUIRE(v > prev);
      prev = v;
    }
  }
  SECTION("ranges") {
    SplitMix64 rng(607);
    for (int rep = 0; rep < 200; ++rep) {
      const double phi = 0.5 + 10.0 * rng.uniform();
      const int dmax = 1 + int(rng.below(30));
      const double p = 0.02 + 0.46 * rng.uniform();
      const int n = 2 + int(rng.below(300));
      const double e1 = stage1_failure_bound(phi, dmax, p, n);
      REQUIRE(e1 > 0.0);
      REQUIRE(e1 <= 2.0 * n);
      const double q = 0.02 + 0.46 * rng.uniform();
      const double e2 = stage2_failure_bound(n, q);
      REQUIRE(e2 > 0.0);
      REQUIRE(e2 <= 1.0);
    }
  }
}

TEST_CASE("combined bounds") {
  const RecoveryBounds b = combined_bounds(6.0, 11, 12, 0.1, 0.1);
  REQUIRE(b.combined_success == 1.0 - b.stage1_failure - b.stage2_failure);
  REQUIRE(b.phi_used == 6.0);
  REQUIRE(b.dmax_used == 11);

  // K100 at p = q = 0.1: the stage-1 constants make the bound vacuous at this
  // scale, and it is reported as-is.
  const RecoveryBounds k100 = combined_bounds(50.0, 99, 100, 0.1, 0.1);
  REQUIRE(k100.stage1_failure > 1.0);
  REQUIRE(k100.vacuous);
  REQUIRE(k100.combined_success < 0.0);

  // Along complete graphs the failure bounds eventually decay monotonically.
  double prev1 = 1e300, prev2 = 1e300;
  for (int n : {1000, 10000, 100000, 1000000}) {
    const double phi = double((n + 1) / 2);
    const double e1 = stage1_failure_bound(phi, n - 1, 0.1, n);
    const double e2 = stage2_failure_bound(n, 0.1);
    REQUIRE(e1 < prev1);
    REQUIRE(e2 <= prev2);
    prev1 = e1;
    prev2 = e2;
  }
  REQUIRE(prev1 <= 1e-100);
}

TEST_CASE("smoothed expansion bound") {
  // log 1 = 0 leaves the probability at 1 - n^{-2.2}.
  const SmoothedExpansionBound b1 = smoothed_expansion_bound(100.0, 1.0);
  REQUIRE(b1.prob_lower == Catch::Approx(1.0 - std::pow(100.0, -2.2)).epsilon(1e-12));

  // n = e makes log n = 1, so the expansion bound is 1/512.
  const SmoothedExpansionBound b2 = smoothed_expansion_bound(std::exp(1.0), 1.0);
  REQUIRE(b2.phi_lower == Catch::Approx(1.0 / 512.0).epsilon(1e-12));

  // epsilon must stay within [1, n]; log^8(1e6) is far beyond 1e6.
  const double eps = std::pow(std::log(1e6), 8.0);
  REQUIRE(eps > 1e6);
  CHECK_THROWS_AS(smoothed_expansion_bound(1e6, eps), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_expansion_bound(100.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_expansion_bound(100.0, 101.0), std::invalid_argument);
}
