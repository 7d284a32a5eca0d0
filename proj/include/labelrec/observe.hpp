#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelrec/graph.hpp"
#include "labelrec/rng.hpp"

namespace labelrec {

// A labeling assigns +1 or -1 to every vertex.
using Labeling = std::vector<int>;

inline void validate_labels(const Labeling& y, int n, const char* what = "labels") {
  if (int(y.size()) != n)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) +
                                " entries, got " + std::to_string(y.size()));
  for (int v : y)
    if (v != 1 && v != -1)
      throw std::invalid_argument(std::string(what) + ": entries must be +1 or -1");
}

struct NoiseParams {
  double p = 0.0;  // edge sign flip probability
  double q = 0.0;  // node sign flip probability
};

// Noisy measurements of a hidden labeling: one sign per edge and one per
// vertex. edges/edge_signs mirror the source graph's sorted edge list, so
// the support of the edge measurements is exactly the edge set.
struct Observations {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<int> edge_signs;
  std::vector<int> node_signs;
};

// +1 with probability 1-p, -1 with probability p; expected value 1-2p.
inline int sample_biased_rademacher(double p, SplitMix64& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("sample_biased_rademacher: p must be in [0, 1]");
  return rng.uniform() < p ? -1 : +1;
}

inline Labeling sample_labels(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Labeling y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.uniform() < 0.5 ? -1 : +1;
  return y;
}

// Edge signs are truth[i]*truth[j] flipped with probability p, node signs are
// truth[u] flipped with probability q. Draws are consumed in sorted edge
// order, then vertex order, so a seed pins down the instance bit-exactly.
inline Observations generate_observations(const Graph& g, const Labeling& truth,
                                          NoiseParams params, std::uint64_t seed) {
  validate_labels(truth, g.n, "truth");
  if (!(params.p >= 0.0 && params.p < 0.5) || !(params.q >= 0.0 && params.q < 0.5))
    throw std::invalid_argument("generate_observations: need p, q in [0, 0.5)");
  if (!is_connected(g))
    throw std::invalid_argument("generate_observations: graph must be connected");
  Observations obs;
  obs.n = g.n;
  obs.edges = g.edges;
  obs.edge_signs.reserve(g.edges.size());
  SplitMix64 rng(seed);
  for (auto [i, j] : g.edges)
    obs.edge_signs.push_back(truth[i] * truth[j] *
                             sample_biased_rademacher(params.p, rng));
  obs.node_signs.reserve(g.n);
  for (int u = 0; u < g.n; ++u)
    obs.node_signs.push_back(truth[u] * sample_biased_rademacher(params.q, rng));
  return obs;
}

// Weight of the node term relative to the edge term in the full score:
// log((1-q)/q) / log((1-p)/p). Defined only on the open noise intervals.
inline double unary_weight(NoiseParams params) {
  if (!(params.p > 0.0 && params.p < 0.5) || !(params.q > 0.0 && params.q < 0.5))
    throw std::invalid_argument("unary_weight: defined only for p, q in (0, 0.5)");
  return std::log((1.0 - params.q) / params.q) /
         std::log((1.0 - params.p) / params.p);
}

// Sum of edge_sign * y_i * y_j over edges (equals half of y^T X y).
inline double score_quadratic(const Labeling& y, const Observations& obs) {
  validate_labels(y, obs.n);
  double s = 0.0;
  for (std::size_t e = 0; e < obs.edges.size(); ++e)
    s += double(obs.edge_signs[e] * y[obs.edges[e].first] * y[obs.edges[e].second]);
  return s;
}

// Quadratic score plus weight * sum of node_sign * y_u.
inline double score_full(const Labeling& y, const Observations& obs, double weight) {
  double s = score_quadratic(y, obs);
  for (int u = 0; u < obs.n; ++u) s += weight * double(obs.node_signs[u] * y[u]);
  return s;
}

inline int hamming_distance(const Labeling& a, const Labeling& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming_distance: size mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

inline bool same_sign_class(const Labeling& a, const Labeling& b) {
  const int d = hamming_distance(a, b);
  return d == 0 || d == int(a.size());
}

}  // namespace labelrec
