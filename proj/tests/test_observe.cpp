#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "labelrec/observe.hpp"
#include "test_helpers.hpp"

using namespace labelrec;
using test_helpers::random_connected_graph;
using test_helpers::random_labels;

TEST_CASE("biased rademacher draws") {
  SplitMix64 rng(1);
  for (int i = 0; i < 100; ++i) REQUIRE(sample_biased_rademacher(0.0, rng) == 1);
  for (int i = 0; i < 100; ++i) REQUIRE(sample_biased_rademacher(1.0, rng) == -1);

  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) sum += sample_biased_rademacher(0.3, rng);
  const double mean = sum / draws;
  // E = 1 - 2p = 0.4, Var = 1 - 0.16 = 0.84.
  REQUIRE(std::fabs(mean - 0.4) <= 4.0 * std::sqrt(0.84 / draws));

  CHECK_THROWS_AS(sample_biased_rademacher(1.5, rng), std::invalid_argument);
}

TEST_CASE("observation generation") {
  SECTION("noiseless observations reproduce the truth") {
    const Graph g = complete(6);
    const Labeling truth = sample_labels(6, 9);
    const Observations obs = generate_observations(g, truth, {0.0, 0.0}, 4);
    for (std::size_t e = 0; e < obs.edges.size(); ++e)
      REQUIRE(obs.edge_signs[e] == truth[obs.edges[e].first] * truth[obs.edges[e].second]);
    REQUIRE(obs.node_signs == truth);
  }

  SECTION("flip rates stay in the binomial band") {
    // complete(142) has 10011 edges.
    const Graph g = complete(142);
    const Labeling truth = sample_labels(g.n, 10);
    const double p = 0.499;
    const Observations obs = generate_observations(g, truth, {p, 0.3}, 77);
    int flips = 0;
    for (std::size_t e = 0; e < obs.edges.size(); ++e)
      flips += obs.edge_signs[e] != truth[obs.edges[e].first] * truth[obs.edges[e].second];
    const double m = double(obs.edges.size());
    REQUIRE(std::fabs(flips / m - p) <= 4.0 * std::sqrt(p * (1 - p) / m));

    // Node flips at q = 0.3 over 10000 vertices.
    const Graph big = cycle(10000);
    const Labeling t2 = sample_labels(big.n, 11);
    const Observations obs2 = generate_observations(big, t2, {0.0, 0.3}, 78);
    int nflips = 0;
    for (int u = 0; u < big.n; ++u) nflips += obs2.node_signs[u] != t2[u];
    REQUIRE(std::fabs(nflips / 10000.0 - 0.3) <= 4.0 * std::sqrt(0.3 * 0.7 / 10000.0));
  }

  SECTION("same seed reproduces the instance") {
    const Graph g = grid(3, 4);
    const Labeling truth = sample_labels(g.n, 5);
    const Observations a = generate_observations(g, truth, {0.2, 0.1}, 123);
    const Observations b = generate_observations(g, truth, {0.2, 0.1}, 123);
    REQUIRE(a.edge_signs == b.edge_signs);
    REQUIRE(a.node_signs == b.node_signs);
    const Observations c = generate_observations(g, truth, {0.2, 0.1}, 124);
    REQUIRE((a.edge_signs != c.edge_signs || a.node_signs != c.node_signs));
  }

  SECTION("support equals the graph's edge set") {
    SplitMix64 rng(64);
    for (int rep = 0; rep < 50; ++rep) {
      const Graph g = random_connected_graph(rng, 2, 20);
      const Labeling truth = random_labels(rng, g.n);
      const Observations obs =
          generate_observations(g, truth, {0.3, 0.3}, rng.next_u64());
      REQUIRE(obs.edges == g.edges);
      REQUIRE(int(obs.node_signs.size()) == g.n);
    }
  }

  SECTION("input validation") {
    const Graph g = cycle(4);
    CHECK_THROWS_AS(generate_observations(g, Labeling(3, 1), {0.1, 0.1}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_observations(g, Labeling(4, 1), {0.5, 0.1}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        generate_observations(make_graph(4, {{0, 1}, {2, 3}}), Labeling(4, 1), {0.1, 0.1}, 1),
        std::invalid_argument);
  }
}

TEST_CASE("unary weight") {
  REQUIRE(unary_weight({0.2, 0.2}) == 1.0);
  REQUIRE(unary_weight({0.1, 0.25}) == Catch::Approx(0.5).margin(1e-15));
  REQUIRE(unary_weight({0.05, 0.4}) == Catch::Approx(0.1377053866549987).margin(1e-15));
  CHECK_THROWS_AS(unary_weight({0.0, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(unary_weight({0.2, 0.5}), std::invalid_argument);
}

TEST_CASE("scores") {
  // Noiseless triangle: every edge agrees with the truth.
  const Graph k3 = complete(3);
  const Labeling truth{1, 1, 1};
  const Observations clean = generate_observations(k3, truth, {0.0, 0.0}, 1);
  REQUIRE(score_quadratic(truth, clean) == 3.0);

  // Flip edge (1,2): two agreements minus one disagreement.
  Observations flipped = clean;
  for (std::size_t e = 0; e < flipped.edges.size(); ++e)
    if (flipped.edges[e] == Edge{1, 2}) flipped.edge_signs[e] = -flipped.edge_signs[e];
  REQUIRE(score_quadratic(truth, flipped) == 1.0);

  SECTION("quadratic score is sign-symmetric, exhaustively for n <= 8") {
    SplitMix64 rng(21);
    const Graph g = random_connected_graph(rng, 8, 8);
    const Observations obs =
        generate_observations(g, random_labels(rng, g.n), {0.25, 0.25}, 3);
    for (std::uint32_t m = 0; m < (1u << 8); ++m) {
      Labeling y(8), neg(8);
      for (int i = 0; i < 8; ++i) {
        y[i] = (m >> i) & 1u ? 1 : -1;
        neg[i] = -y[i];
      }
      REQUIRE(score_quadratic(y, obs) == score_quadratic(neg, obs));
    }
  }

  SECTION("full score difference is twice the weighted node score") {
    SplitMix64 rng(22);
    for (int rep = 0; rep < 100; ++rep) {
      const Graph g = random_connected_graph(rng, 2, 12);
      const Observations obs =
          generate_observations(g, random_labels(rng, g.n), {0.3, 0.3}, rng.next_u64());
      const Labeling y = random_labels(rng, g.n);
      Labeling neg(y);
      for (int& v : neg) v = -v;
      const double w = 0.25 + rng.uniform();
      double node = 0.0;
      for (int u = 0; u < g.n; ++u) node += obs.node_signs[u] * y[u];
      REQUIRE(score_full(y, obs, w) - score_full(neg, obs, w) ==
              Catch::Approx(2.0 * w * node).margin(1e-9));
    }
  }
}

TEST_CASE("label helpers") {
  REQUIRE(hamming_distance({1, -1, 1}, {1, 1, 1}) == 1);
  REQUIRE(same_sign_class({1, -1}, {-1, 1}));
  REQUIRE_FALSE(same_sign_class({1, -1}, {1, 1}));
  CHECK_THROWS_AS(validate_labels({1, 0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(validate_labels({1, 1}, 3), std::invalid_argument);
}
