#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "labelrec/rng.hpp"

namespace labelrec {

using Edge = std::pair<int, int>;

// Simple undirected graph. The edge list is sorted lexicographically with
// i < j per edge; adjacency lists are derived from it at construction.
// Instances are immutable once built and safe to share across threads.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adjacency;
};

inline Graph make_graph(int n, std::vector<Edge> edges) {
  if (n < 1)
    throw std::invalid_argument("graph: vertex count must be >= 1, got " +
                                std::to_string(n));
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first == e.second)
      throw std::invalid_argument("graph: self-loop at vertex " +
                                  std::to_string(e.first));
    if (e.first < 0 || e.second >= n)
      throw std::invalid_argument("graph: edge (" + std::to_string(e.first) +
                                  ", " + std::to_string(e.second) +
                                  ") out of range for n=" + std::to_string(n));
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("graph: duplicate edge");
  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  g.adjacency.assign(n, {});
  for (auto [i, j] : g.edges) {
    g.adjacency[i].push_back(j);
    g.adjacency[j].push_back(i);
  }
  return g;
}

inline int degree(const Graph& g, int v) { return int(g.adjacency[v].size()); }

inline int max_degree(const Graph& g) {
  int best = 0;
  for (int v = 0; v < g.n; ++v) best = std::max(best, degree(g, v));
  return best;
}

inline bool is_connected(const Graph& g) {
  if (g.n <= 1) return true;
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : g.adjacency[v])
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  return count == g.n;
}

// Connected components, each sorted, listed by smallest contained vertex.
inline std::vector<std::vector<int>> components(const Graph& g) {
  std::vector<char> seen(g.n, 0);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s};
    seen[s] = 1;
    for (std::size_t h = 0; h < comp.size(); ++h)
      for (int u : g.adjacency[comp[h]])
        if (!seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
        }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

// ---------------------------------------------------------------------------
// Generators. All randomized generators consume a SplitMix64 stream so that a
// seed pins down the graph bit-exactly.

inline Graph complete(int n) {
  if (n < 2)
    throw std::invalid_argument("complete: need n >= 2, got " + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(std::size_t(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return make_graph(n, std::move(edges));
}

inline Graph cycle(int n) {
  if (n < 3)
    throw std::invalid_argument("cycle: need n >= 3, got " + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(n);
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(0, n - 1);
  return make_graph(n, std::move(edges));
}

// rows x cols lattice with 4-neighborhood, no wraparound.
inline Graph grid(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2)
    throw std::invalid_argument("grid: need rows, cols >= 1 and rows*cols >= 2");
  auto id = [cols](int r, int c) { return r * cols + c; };
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  return make_graph(rows * cols, std::move(edges));
}

inline Graph erdos_renyi(int n, double prob, std::uint64_t seed) {
  if (n < 1)
    throw std::invalid_argument("erdos_renyi: need n >= 1");
  if (!(prob >= 0.0 && prob <= 1.0))
    throw std::invalid_argument("erdos_renyi: prob must be in [0, 1]");
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(prob)) edges.emplace_back(i, j);
  return make_graph(n, std::move(edges));
}

// Configuration model with rejection of self-loops, multi-edges and
// disconnected samples. Rejection is capped so infeasible parameters fail
// loudly instead of looping.
inline Graph random_regular(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 0 || d >= n || (std::int64_t(n) * d) % 2 != 0)
    throw std::invalid_argument("random_regular: need 0 <= d < n and n*d even");
  if (d == 0 && n > 1)
    throw std::invalid_argument("random_regular: d = 0 cannot be connected for n > 1");
  if (n == 1) return make_graph(1, {});
  SplitMix64 rng(seed);
  std::vector<int> stubs(std::size_t(n) * d);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (int v = 0; v < n; ++v)
      std::fill_n(stubs.begin() + std::size_t(v) * d, d, v);
    for (std::size_t i = stubs.size() - 1; i > 0; --i)
      std::swap(stubs[i], stubs[rng.below(i + 1)]);
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    std::unordered_set<std::int64_t> seen;
    bool simple = true;
    for (std::size_t t = 0; t + 1 < stubs.size(); t += 2) {
      int a = stubs[t], b = stubs[t + 1];
      if (a == b) {
        simple = false;
        break;
      }
      if (a > b) std::swap(a, b);
      if (!seen.insert(std::int64_t(a) * n + b).second) {
        simple = false;
        break;
      }
      edges.emplace_back(a, b);
    }
    if (!simple) continue;
    Graph g = make_graph(n, std::move(edges));
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("random_regular: no simple connected sample in 1000 attempts (n=" +
                           std::to_string(n) + ", d=" + std::to_string(d) + ")");
}

// Union of base with an independent ER(n, epsilon/n) edge set.
inline Graph smooth(const Graph& base, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("smooth: epsilon must be >= 0");
  const double prob = epsilon / base.n;
  if (prob > 1.0)
    throw std::invalid_argument("smooth: epsilon/n = " + std::to_string(prob) +
                                " exceeds 1; epsilon must be <= n");
  Graph noise = erdos_renyi(base.n, prob, seed);
  std::vector<Edge> merged = base.edges;
  merged.insert(merged.end(), noise.edges.begin(), noise.edges.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return make_graph(base.n, std::move(merged));
}

// ---------------------------------------------------------------------------
// Exact edge expansion by exhaustive subset search.

// best_set attains the minimum of cut_edges / |set| over nonempty sets of at
// most n/2 vertices; expansion_num/expansion_den hold that ratio exactly.
struct CutReport {
  std::vector<int> best_set;
  long long cut_edges = 0;
  long long expansion_num = 0;
  long long expansion_den = 1;
  double expansion = 0.0;
};

namespace detail {

// Lexicographic order on the sorted vertex lists encoded by two bitmasks.
inline bool subset_lex_less(std::uint32_t a, std::uint32_t b) {
  while (a != 0 && b != 0) {
    const int va = std::countr_zero(a), vb = std::countr_zero(b);
    if (va != vb) return va < vb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

}  // namespace detail

// Minimizes cut(S)/|S| over all nonempty S with |S| <= n/2. Ties break toward
// smaller |S|, then the lexicographically smallest set. Enumeration walks
// subsets of {1..n-1} in Gray-code order with O(1) cut updates; sets that
// contain vertex 0 are reached as complements. Hard cap n <= 24.
inline CutReport cheeger_exact(const Graph& g) {
  if (g.n < 2) throw std::invalid_argument("cheeger_exact: need n >= 2");
  if (g.n > 24)
    throw std::invalid_argument(
        "cheeger_exact: n > 24 is out of range for exhaustive search; "
        "use cheeger_spectral_bounds");
  const int n = g.n;

  if (!is_connected(g)) {
    // Expansion 0, witnessed by the smallest component (ties: first found,
    // i.e. the one containing the smallest vertex).
    auto comps = components(g);
    std::size_t best = 0;
    for (std::size_t c = 1; c < comps.size(); ++c)
      if (comps[c].size() < comps[best].size()) best = c;
    CutReport r;
    r.best_set = comps[best];
    r.cut_edges = 0;
    r.expansion_num = 0;
    r.expansion_den = (long long)r.best_set.size();
    r.expansion = 0.0;
    return r;
  }

  std::vector<std::uint32_t> adj(n, 0);
  for (auto [i, j] : g.edges) {
    adj[i] |= 1u << j;
    adj[j] |= 1u << i;
  }
  const int cap = n / 2;
  const std::uint32_t full = (1u << n) - 1;

  long long best_cut = -1, best_size = 1;
  std::uint32_t best_mask = 0;
  auto consider = [&](std::uint32_t mask, long long cut, long long size) {
    if (best_cut >= 0) {
      const long long lhs = cut * best_size, rhs = best_cut * size;
      if (lhs > rhs) return;
      if (lhs == rhs) {
        if (size > best_size) return;
        if (size == best_size && !detail::subset_lex_less(mask, best_mask)) return;
      }
    }
    best_cut = cut;
    best_size = size;
    best_mask = mask;
  };

  std::uint32_t mask = 0;
  long long cut = 0;
  const std::uint64_t steps = 1ull << (n - 1);
  for (std::uint64_t it = 1; it < steps; ++it) {
    const int v = std::countr_zero(it) + 1;
    const long long inside = std::popcount(adj[v] & mask);
    const long long deg = degree(g, v);
    if ((mask >> v) & 1u) {
      mask &= ~(1u << v);
      cut += 2 * inside - deg;
    } else {
      cut += deg - 2 * inside;
      mask |= 1u << v;
    }
    const int size = std::popcount(mask);
    if (size >= 1 && size <= cap) consider(mask, cut, size);
    if (n - size >= 1 && n - size <= cap) consider(full & ~mask, cut, n - size);
  }

  CutReport r;
  r.cut_edges = best_cut;
  r.expansion_num = best_cut;
  r.expansion_den = best_size;
  r.expansion = double(best_cut) / double(best_size);
  for (int v = 0; v < n; ++v)
    if ((best_mask >> v) & 1u) r.best_set.push_back(v);
  return r;
}

}  // namespace labelrec
