#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "labelrec/observe.hpp"
#include "labelrec/rng.hpp"
#include "labelrec/spectral.hpp"

namespace labelrec {

struct SolveOptions {
  std::uint64_t seed = 1;
  int max_sweeps = 2000;
  double movement_tol = 1e-7;
  int rank = 0;  // 0 picks ceil(sqrt(2n)) + 1
};

// Low-rank factor Z of the Gram matrix Y = Z Z^T with unit-norm rows, plus the
// attained objective <X, Z Z^T> and convergence bookkeeping.
struct GramSolution {
  int n = 0;
  int rank = 0;
  std::vector<double> factor;  // n x rank, row-major
  double objective = 0.0;
  int sweeps = 0;
  bool converged = false;
  double max_row_move = 0.0;
  std::vector<double> sweep_objectives;  // objective after each sweep
};

// Eigenvalue evidence that a labeling is the unique optimum of the relaxed
// program: the two smallest eigenvalues of V - X where V is the diagonal
// matrix with V_ii = y_i * (X y)_i.
struct CertificateReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool certified = false;
  double tolerance = 0.0;
  std::vector<double> v_diagonal;
};

struct PipelineResult {
  Labeling labels;
  bool certified = false;
  bool stage2_flipped = false;
  double objective = 0.0;
  std::optional<int> hamming;
  bool solver_converged = false;
  CertificateReport certificate;
};

// Dense realization of the edge measurements (zero diagonal).
inline SymMatrix dense_edge_matrix(const Observations& obs) {
  SymMatrix x(obs.n);
  for (std::size_t e = 0; e < obs.edges.size(); ++e)
    x.set(obs.edges[e].first, obs.edges[e].second, double(obs.edge_signs[e]));
  return x;
}

namespace detail {

inline std::vector<std::vector<std::pair<int, double>>> signed_adjacency(
    const Observations& obs) {
  std::vector<std::vector<std::pair<int, double>>> nbr(obs.n);
  for (std::size_t e = 0; e < obs.edges.size(); ++e) {
    const auto [i, j] = obs.edges[e];
    const double s = double(obs.edge_signs[e]);
    nbr[i].emplace_back(j, s);
    nbr[j].emplace_back(i, s);
  }
  return nbr;
}

// One standard normal draw via Box-Muller; consumes two uniforms.
inline void gaussian_pair(SplitMix64& rng, double& g0, double& g1) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  g0 = r * std::cos(a);
  g1 = r * std::sin(a);
}

}  // namespace detail

// Low-rank coordinate ascent for max <X, Y> s.t. Y_ii = 1, Y >= 0, with
// Y = Z Z^T. Each row update z_i <- g_i / ||g_i||, g_i = sum_j X_ij z_j, is
// the exact row-wise maximizer, so the objective never decreases. Rows start
// uniform on the unit sphere; a zero gradient leaves the row unchanged.
inline GramSolution solve_sdp(const Observations& obs, const SolveOptions& opts = {}) {
  const int n = obs.n;
  if (n < 2) throw std::invalid_argument("solve_sdp: need n >= 2");
  const int k = opts.rank > 0 ? opts.rank
                              : int(std::ceil(std::sqrt(2.0 * double(n)))) + 1;
  const auto nbr = detail::signed_adjacency(obs);

  GramSolution sol;
  sol.n = n;
  sol.rank = k;
  sol.factor.assign(std::size_t(n) * k, 0.0);
  SplitMix64 rng(opts.seed);
  for (int i = 0; i < n; ++i) {
    double* z = &sol.factor[std::size_t(i) * k];
    double norm = 0.0;
    while (norm < 1e-12) {
      for (int t = 0; t < k; t += 2) {
        double g0, g1;
        detail::gaussian_pair(rng, g0, g1);
        z[t] = g0;
        if (t + 1 < k) z[t + 1] = g1;
      }
      norm = 0.0;
      for (int t = 0; t < k; ++t) norm += z[t] * z[t];
      norm = std::sqrt(norm);
    }
    for (int t = 0; t < k; ++t) z[t] /= norm;
  }

  auto objective = [&]() {
    double o = 0.0;
    for (std::size_t e = 0; e < obs.edges.size(); ++e) {
      const double* zi = &sol.factor[std::size_t(obs.edges[e].first) * k];
      const double* zj = &sol.factor[std::size_t(obs.edges[e].second) * k];
      double dot = 0.0;
      for (int t = 0; t < k; ++t) dot += zi[t] * zj[t];
      o += 2.0 * double(obs.edge_signs[e]) * dot;
    }
    return o;
  };

  std::vector<double> grad(k);
  int sweeps = 0;
  bool converged = false;
  double move = 0.0;
  while (sweeps < opts.max_sweeps) {
    move = 0.0;
    for (int i = 0; i < n; ++i) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (auto [j, s] : nbr[i]) {
        const double* zj = &sol.factor[std::size_t(j) * k];
        for (int t = 0; t < k; ++t) grad[t] += s * zj[t];
      }
      double norm = 0.0;
      for (int t = 0; t < k; ++t) norm += grad[t] * grad[t];
      norm = std::sqrt(norm);
      if (norm <= 0.0) continue;  // keep the previous row
      double* z = &sol.factor[std::size_t(i) * k];
      double m2 = 0.0;
      for (int t = 0; t < k; ++t) {
        const double nz = grad[t] / norm;
        const double d = nz - z[t];
        m2 += d * d;
        z[t] = nz;
      }
      move = std::max(move, std::sqrt(m2));
    }
    ++sweeps;
    sol.sweep_objectives.push_back(objective());
    if (move < opts.movement_tol) {
      converged = true;
      break;
    }
  }
  sol.sweeps = sweeps;
  sol.converged = converged;
  sol.max_row_move = move;
  sol.objective = objective();
  return sol;
}

// Rank-1 candidate: sign of each row's projection onto the leading right
// singular direction of Z (the top eigenvector of Z^T Z). Zero projections
// map to +1.
inline Labeling round_to_labels(const GramSolution& sol) {
  const int n = sol.n, k = sol.rank;
  SymMatrix b(k);
  for (int s = 0; s < k; ++s)
    for (int t = s; t < k; ++t) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += sol.factor[std::size_t(i) * k + s] * sol.factor[std::size_t(i) * k + t];
      b.set(s, t, acc);
    }
  const EigenSystem es = symmetric_eigen(b);
  const std::vector<double>& lead = es.vectors.back();
  Labeling y(n);
  for (int i = 0; i < n; ++i) {
    double dot = 0.0;
    for (int t = 0; t < k; ++t) dot += sol.factor[std::size_t(i) * k + t] * lead[t];
    y[i] = dot < 0.0 ? -1 : +1;
  }
  return y;
}

// Builds the diagonal dual candidate V with V_ii = y_i (X y)_i and reports the
// two smallest eigenvalues of V - X. (V - X) y = 0 by construction, so the
// candidate labeling certifies as the unique optimum exactly when V - X is
// positive semidefinite with a one-dimensional null space.
inline CertificateReport build_certificate(const Observations& obs, const Labeling& y) {
  const int n = obs.n;
  if (n < 2) throw std::invalid_argument("build_certificate: need n >= 2");
  validate_labels(y, n);
  std::vector<double> xy(n, 0.0);
  std::vector<int> deg(n, 0);
  for (std::size_t e = 0; e < obs.edges.size(); ++e) {
    const auto [i, j] = obs.edges[e];
    const double s = double(obs.edge_signs[e]);
    xy[i] += s * double(y[j]);
    xy[j] += s * double(y[i]);
    ++deg[i];
    ++deg[j];
  }
  const int dmax = *std::max_element(deg.begin(), deg.end());

  SymMatrix c(n);
  for (int i = 0; i < n; ++i) c.set(i, i, double(y[i]) * xy[i]);
  for (std::size_t e = 0; e < obs.edges.size(); ++e)
    c.set(obs.edges[e].first, obs.edges[e].second, -double(obs.edge_signs[e]));

  const EigenSystem es = symmetric_eigen(c);
  CertificateReport rep;
  rep.lambda1 = es.values[0];
  rep.lambda2 = es.values[1];
  rep.tolerance = 1e-7 * std::max(1.0, double(dmax));
  rep.certified = rep.lambda1 >= -rep.tolerance && rep.lambda2 >= rep.tolerance;
  rep.v_diagonal.resize(n);
  for (int i = 0; i < n; ++i) rep.v_diagonal[i] = double(y[i]) * xy[i];
  return rep;
}

struct BruteForceResult {
  Labeling labels;
  double value = 0.0;
};

// Exhaustive maximizer of the quadratic score over sign vectors, fixing
// y_0 = +1 (the score is sign-symmetric). Ties break toward the
// lexicographically smallest vector, treating -1 < +1.
inline BruteForceResult brute_force_max(const Observations& obs) {
  const int n = obs.n;
  if (n < 1) throw std::invalid_argument("brute_force_max: need n >= 1");
  if (n > 20)
    throw std::invalid_argument("brute_force_max: n > 20 is out of range; use solve_sdp");
  Labeling y(n, 1);
  BruteForceResult best;
  best.value = -1e300;
  const std::uint64_t total = n == 1 ? 1 : (1ull << (n - 1));
  for (std::uint64_t m = 0; m < total; ++m) {
    for (int i = 1; i < n; ++i)
      y[i] = (m >> (n - 1 - i)) & 1ull ? +1 : -1;
    const double v = score_quadratic(y, obs);
    if (v > best.value) {
      best.value = v;
      best.labels = y;
    }
  }
  return best;
}

struct SignChoice {
  Labeling labels;
  bool flipped = false;
};

// Picks y or -y by the sign of the node score c^T y. An exact tie goes to the
// candidate that agrees with the node observation at the lowest-index vertex.
inline SignChoice stage2_select(const Labeling& y, const Observations& obs) {
  if (obs.n < 1) throw std::invalid_argument("stage2_select: need n >= 1");
  validate_labels(y, obs.n);
  long long dot = 0;
  for (int u = 0; u < obs.n; ++u) dot += (long long)(obs.node_signs[u] * y[u]);
  bool flip;
  if (dot > 0)
    flip = false;
  else if (dot < 0)
    flip = true;
  else
    flip = obs.node_signs[0] != y[0];
  SignChoice choice;
  choice.flipped = flip;
  choice.labels = y;
  if (flip)
    for (int& v : choice.labels) v = -v;
  return choice;
}

struct RecoverOptions {
  SolveOptions solve;
  std::optional<Labeling> truth;  // when present, the result carries hamming
};

// Full two-stage pipeline: relax, round, certify the rounded candidate, then
// resolve the global sign with the node observations.
inline PipelineResult recover(const Graph& g, const Observations& obs,
                              const RecoverOptions& opts = {}) {
  if (!is_connected(g))
    throw std::invalid_argument("recover: graph must be connected");
  if (obs.n != g.n || obs.edges != g.edges)
    throw std::invalid_argument("recover: observations do not match the graph's edge set");

  const GramSolution sol = solve_sdp(obs, opts.solve);
  const Labeling rounded = round_to_labels(sol);
  const CertificateReport cert = build_certificate(obs, rounded);
  const SignChoice choice = stage2_select(rounded, obs);

  PipelineResult res;
  res.labels = choice.labels;
  res.certified = cert.certified;
  res.stage2_flipped = choice.flipped;
  res.objective = sol.objective;
  res.solver_converged = sol.converged;
  res.certificate = cert;
  if (opts.truth) res.hamming = hamming_distance(res.labels, *opts.truth);
  return res;
}

}  // namespace labelrec
