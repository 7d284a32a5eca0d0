#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace labelrec {

// Closed-form failure-probability bounds for the two pipeline stages and the
// smoothed-expansion guarantee. All exponentials and logarithms are natural.

// Bound on the probability that the relaxation misses the sign class:
//   2n * exp(-3 (1-2p)^2 phi^4 /
//            (1536 dmax^3 p (1-p) + 32 (1-2p)(1-p) phi^2 dmax)).
inline double stage1_failure_bound(double phi, int dmax, double p, int n) {
  if (!(phi > 0.0))
    throw std::invalid_argument("stage1_failure_bound: phi must be > 0");
  if (dmax < 1)
    throw std::invalid_argument("stage1_failure_bound: dmax must be >= 1");
  if (!(p > 0.0 && p < 0.5))
    throw std::invalid_argument("stage1_failure_bound: p must lie in (0, 0.5)");
  if (n < 1)
    throw std::invalid_argument("stage1_failure_bound: n must be >= 1");
  const double t = 1.0 - 2.0 * p;
  const double phi2 = phi * phi;
  const double d = double(dmax);
  const double num = 3.0 * t * t * phi2 * phi2;
  const double den = 1536.0 * d * d * d * p * (1.0 - p) + 32.0 * t * (1.0 - p) * phi2 * d;
  return 2.0 * double(n) * std::exp(-num / den);
}

// Bound on the probability that the node score prefers the wrong sign:
//   exp(-(n/2) (1-2q)^2).
inline double stage2_failure_bound(int n, double q) {
  if (n < 1)
    throw std::invalid_argument("stage2_failure_bound: n must be >= 1");
  if (!(q > 0.0 && q < 0.5))
    throw std::invalid_argument("stage2_failure_bound: q must lie in (0, 0.5)");
  const double t = 1.0 - 2.0 * q;
  return std::exp(-0.5 * double(n) * t * t);
}

// stage1/stage2 failure bounds for one configuration, combined into a success
// probability 1 - stage1 - stage2. Nothing is clamped: a stage1 bound above 1
// is reported as-is and flagged vacuous.
struct RecoveryBounds {
  double stage1_failure = 0.0;
  double stage2_failure = 0.0;
  double combined_success = 0.0;
  double phi_used = 0.0;
  int dmax_used = 0;
  bool vacuous = false;
};

inline RecoveryBounds combined_bounds(double phi, int dmax, int n, double p, double q) {
  RecoveryBounds b;
  b.stage1_failure = stage1_failure_bound(phi, dmax, p, n);
  b.stage2_failure = stage2_failure_bound(n, q);
  b.combined_success = 1.0 - b.stage1_failure - b.stage2_failure;
  b.phi_used = phi;
  b.dmax_used = dmax;
  b.vacuous = b.stage1_failure > 1.0;
  return b;
}

// Guarantee for a graph unioned with ER(n, epsilon/n) edges: expansion at
// least epsilon / (256 + 256 log n) with probability at least
// 1 - n^(-2.2 - log(epsilon)/2). n is accepted as a real so the formula can
// also be probed off the integer grid.
struct SmoothedExpansionBound {
  double phi_lower = 0.0;
  double prob_lower = 0.0;
};

inline SmoothedExpansionBound smoothed_expansion_bound(double n, double epsilon) {
  if (!(n >= 2.0))
    throw std::invalid_argument("smoothed_expansion_bound: n must be >= 2");
  if (!(epsilon >= 1.0 && epsilon <= n))
    throw std::invalid_argument("smoothed_expansion_bound: epsilon must lie in [1, n], got " +
                                std::to_string(epsilon));
  SmoothedExpansionBound b;
  b.phi_lower = epsilon / (256.0 + 256.0 * std::log(n));
  b.prob_lower = 1.0 - std::pow(n, -2.2 - 0.5 * std::log(epsilon));
  return b;
}

}  // namespace labelrec
