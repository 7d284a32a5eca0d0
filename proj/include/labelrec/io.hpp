#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelrec/graph.hpp"
#include "labelrec/observe.hpp"

namespace labelrec {

// Text formats:
//   graph:        line 1 "n m", then m lines "i j" with i < j, sorted
//   observations: line 1 "n m", then m lines "i j s" (s = -1 or 1, sorted),
//                 then one line of n node signs
//   labels:       one line of n space-separated +-1 values
// Parsers report violations with 1-based line numbers.

namespace detail {

[[noreturn]] inline void parse_fail(int line, const std::string& msg) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
}

// Reads the next non-blank line; returns false at end of input.
inline bool next_line(std::istream& in, std::string& out, int& line_no) {
  while (std::getline(in, out)) {
    ++line_no;
    if (out.find_first_not_of(" \t\r\n") != std::string::npos) return true;
  }
  return false;
}

inline std::vector<long long> parse_ints(const std::string& text, int line_no,
                                         std::size_t expected) {
  std::istringstream ss(text);
  std::vector<long long> vals;
  long long v;
  while (ss >> v) vals.push_back(v);
  std::string tail;
  if (!ss.eof() && ss.fail()) {
    ss.clear();
    ss >> tail;
    parse_fail(line_no, "unexpected token '" + tail + "'");
  }
  if (vals.size() != expected)
    parse_fail(line_no, "expected " + std::to_string(expected) + " integers, got " +
                            std::to_string(vals.size()));
  return vals;
}

}  // namespace detail

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (auto [i, j] : g.edges) out << i << ' ' << j << '\n';
}

inline Graph read_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!detail::next_line(in, line, line_no))
    detail::parse_fail(1, "missing header 'n m'");
  const auto header = detail::parse_ints(line, line_no, 2);
  const long long n = header[0], m = header[1];
  if (n < 1 || n > 1000000000) detail::parse_fail(line_no, "vertex count out of range");
  if (m < 0) detail::parse_fail(line_no, "edge count must be >= 0");

  std::vector<Edge> edges;
  edges.reserve(std::size_t(m));
  Edge prev{-1, -1};
  for (long long e = 0; e < m; ++e) {
    if (!detail::next_line(in, line, line_no))
      detail::parse_fail(line_no + 1, "expected " + std::to_string(m) +
                                          " edge lines, got " + std::to_string(e));
    const auto vals = detail::parse_ints(line, line_no, 2);
    const long long i = vals[0], j = vals[1];
    if (i < 0 || j >= n || i >= j)
      detail::parse_fail(line_no, "edge must satisfy 0 <= i < j < n");
    const Edge cur{int(i), int(j)};
    if (!(prev < cur))
      detail::parse_fail(line_no, "edges must be strictly increasing (sorted, no duplicates)");
    prev = cur;
    edges.push_back(cur);
  }
  if (detail::next_line(in, line, line_no))
    detail::parse_fail(line_no, "unexpected data after edge list");
  return make_graph(int(n), std::move(edges));
}

inline void write_observations(std::ostream& out, const Observations& obs) {
  out << obs.n << ' ' << obs.edges.size() << '\n';
  for (std::size_t e = 0; e < obs.edges.size(); ++e)
    out << obs.edges[e].first << ' ' << obs.edges[e].second << ' '
        << obs.edge_signs[e] << '\n';
  for (int u = 0; u < obs.n; ++u) out << obs.node_signs[u] << " \n"[u + 1 == obs.n];
}

inline Observations read_observations(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!detail::next_line(in, line, line_no))
    detail::parse_fail(1, "missing header 'n m'");
  const auto header = detail::parse_ints(line, line_no, 2);
  const long long n = header[0], m = header[1];
  if (n < 1 || n > 1000000000) detail::parse_fail(line_no, "vertex count out of range");
  if (m < 0) detail::parse_fail(line_no, "edge count must be >= 0");

  Observations obs;
  obs.n = int(n);
  Edge prev{-1, -1};
  for (long long e = 0; e < m; ++e) {
    if (!detail::next_line(in, line, line_no))
      detail::parse_fail(line_no + 1, "expected " + std::to_string(m) +
                                          " edge lines, got " + std::to_string(e));
    const auto vals = detail::parse_ints(line, line_no, 3);
    const long long i = vals[0], j = vals[1], s = vals[2];
    if (i < 0 || j >= n || i >= j)
      detail::parse_fail(line_no, "edge must satisfy 0 <= i < j < n");
    if (s != 1 && s != -1) detail::parse_fail(line_no, "edge sign must be -1 or 1");
    const Edge cur{int(i), int(j)};
    if (!(prev < cur))
      detail::parse_fail(line_no, "edges must be strictly increasing (sorted, no duplicates)");
    prev = cur;
    obs.edges.push_back(cur);
    obs.edge_signs.push_back(int(s));
  }
  if (!detail::next_line(in, line, line_no))
    detail::parse_fail(line_no + 1, "missing node sign line");
  const auto signs = detail::parse_ints(line, line_no, std::size_t(n));
  for (long long v : signs) {
    if (v != 1 && v != -1) detail::parse_fail(line_no, "node sign must be -1 or 1");
    obs.node_signs.push_back(int(v));
  }
  if (detail::next_line(in, line, line_no))
    detail::parse_fail(line_no, "unexpected data after node signs");
  return obs;
}

inline void write_labels(std::ostream& out, const Labeling& y) {
  for (std::size_t i = 0; i < y.size(); ++i)
    out << y[i] << " \n"[i + 1 == y.size()];
}

inline Labeling read_labels(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!detail::next_line(in, line, line_no))
    detail::parse_fail(1, "missing label line");
  std::istringstream ss(line);
  Labeling y;
  long long v;
  while (ss >> v) {
    if (v != 1 && v != -1) detail::parse_fail(line_no, "labels must be -1 or 1");
    y.push_back(int(v));
  }
  if (!ss.eof()) detail::parse_fail(line_no, "labels must be integers");
  if (y.empty()) detail::parse_fail(line_no, "missing label line");
  if (detail::next_line(in, line, line_no))
    detail::parse_fail(line_no, "unexpected data after labels");
  return y;
}

// File wrappers; parse errors are rethrown with the path prefixed.

namespace detail {

template <typename Fn>
auto load_file(const std::string& path, Fn parse) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  try {
    return parse(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

template <typename Fn>
void save_file(const std::string& path, Fn write) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  write(out);
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace detail

inline Graph load_graph(const std::string& path) {
  return detail::load_file(path, [](std::istream& in) { return read_graph(in); });
}
inline void save_graph(const std::string& path, const Graph& g) {
  detail::save_file(path, [&](std::ostream& out) { write_graph(out, g); });
}
inline Observations load_observations(const std::string& path) {
  return detail::load_file(path, [](std::istream& in) { return read_observations(in); });
}
inline void save_observations(const std::string& path, const Observations& obs) {
  detail::save_file(path, [&](std::ostream& out) { write_observations(out, obs); });
}
inline Labeling load_labels(const std::string& path) {
  return detail::load_file(path, [](std::istream& in) { return read_labels(in); });
}
inline void save_labels(const std::string& path, const Labeling& y) {
  detail::save_file(path, [&](std::ostream& out) { write_labels(out, y); });
}

}  // namespace labelrec
