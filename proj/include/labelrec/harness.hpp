#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "labelrec/bounds.hpp"
#include "labelrec/graph.hpp"
#include "labelrec/observe.hpp"
#include "labelrec/rng.hpp"
#include "labelrec/solve.hpp"
#include "labelrec/spectral.hpp"

namespace labelrec {

// One Monte Carlo sweep: a graph family, a grid of edge-noise values, and a
// number of trials per grid point. Each trial draws a fresh truth labeling
// unless fixed_truth is set. compare_brute_force is forced off for n > 20.
struct ExperimentConfig {
  std::string family;  // complete | cycle | grid | regular | er | smoothed
  nlohmann::json family_params = nlohmann::json::object();
  int n = 0;
  std::vector<double> p_grid;
  double q = 0.0;
  int trials = 0;
  std::uint64_t base_seed = 0;
  bool compare_brute_force = false;
  std::string output_path;
  bool fixed_truth = false;
  // wall_ms is recorded only when set; otherwise it is written as 0 so the
  // emitted records are a pure function of the config.
  bool record_timing = false;
};

struct TrialRecord {
  double p = 0.0;
  double q = 0.0;
  int trial_index = 0;
  std::uint64_t seed = 0;
  bool recovered = false;             // labels equal the truth after sign selection
  bool sign_class_recovered = false;  // labels are the truth up to a global sign
  bool certified = false;
  int hamming = 0;
  double objective = 0.0;
  std::optional<bool> brute_match;
  std::int64_t wall_ms = 0;
};

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  static const char* known[] = {"family",        "family_params", "n",
                                "p_grid",        "q",             "trials",
                                "base_seed",     "compare_brute_force",
                                "output_path",   "fixed_truth",   "record_timing"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument("config: unknown key '" + it.key() + "'");
  }
  ExperimentConfig cfg;
  cfg.family = j.at("family").get<std::string>();
  if (cfg.family != "complete" && cfg.family != "cycle" && cfg.family != "grid" &&
      cfg.family != "regular" && cfg.family != "er" && cfg.family != "smoothed")
    throw std::invalid_argument("config: unknown family '" + cfg.family + "'");
  if (j.contains("family_params")) cfg.family_params = j.at("family_params");
  cfg.n = j.at("n").get<int>();
  if (cfg.n < 2) throw std::invalid_argument("config: n must be >= 2");
  cfg.p_grid = j.at("p_grid").get<std::vector<double>>();
  if (cfg.p_grid.empty()) throw std::invalid_argument("config: p_grid must be nonempty");
  for (double p : cfg.p_grid)
    if (!(p >= 0.0 && p < 0.5))
      throw std::invalid_argument("config: p_grid values must lie in [0, 0.5)");
  cfg.q = j.at("q").get<double>();
  if (!(cfg.q >= 0.0 && cfg.q < 0.5))
    throw std::invalid_argument("config: q must lie in [0, 0.5)");
  cfg.trials = j.at("trials").get<int>();
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("compare_brute_force"))
    cfg.compare_brute_force = j.at("compare_brute_force").get<bool>();
  if (cfg.n > 20) cfg.compare_brute_force = false;
  cfg.output_path = j.value("output_path", std::string("sweep"));
  cfg.fixed_truth = j.value("fixed_truth", false);
  cfg.record_timing = j.value("record_timing", false);
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return parse_experiment_config(j);
}

// Builds one graph for a family; random families consume the given seed.
inline Graph build_family_graph(const std::string& family,
                                const nlohmann::json& params, int n,
                                std::uint64_t seed) {
  auto require = [&](const char* key) {
    if (!params.contains(key))
      throw std::invalid_argument("family '" + family + "' needs parameter '" +
                                  std::string(key) + "'");
    return params.at(key);
  };
  if (family == "complete") return complete(n);
  if (family == "cycle") return cycle(n);
  if (family == "grid") {
    const int rows = require("rows").get<int>();
    const int cols = require("cols").get<int>();
    if (rows * cols != n)
      throw std::invalid_argument("grid: rows*cols must equal n");
    return grid(rows, cols);
  }
  if (family == "regular") return random_regular(n, require("d").get<int>(), seed);
  if (family == "er") return erdos_renyi(n, require("prob").get<double>(), seed);
  if (family == "smoothed") {
    const std::string base_family = require("base_family").get<std::string>();
    const double epsilon = require("epsilon").get<double>();
    if (base_family == "smoothed")
      throw std::invalid_argument("smoothed: base_family cannot itself be smoothed");
    const Graph base = build_family_graph(base_family, params, n, seed);
    return smooth(base, epsilon, derive_seed(seed, 0x5a00711));
  }
  throw std::invalid_argument("unknown family '" + family + "'");
}

// Family graph with connectivity retries for the random families.
inline Graph generate_experiment_graph(const ExperimentConfig& cfg) {
  const std::uint64_t seed0 = derive_seed(cfg.base_seed, 0x6a4f);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Graph g =
        build_family_graph(cfg.family, cfg.family_params, cfg.n, seed0 + attempt);
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("experiment: no connected '" + cfg.family +
                           "' graph with n=" + std::to_string(cfg.n) +
                           " in 100 attempts");
}

struct ExperimentRun {
  Graph graph;
  std::vector<TrialRecord> records;  // ordered by (p_index, trial_index)
};

namespace detail {

inline int harness_thread_count() {
  if (const char* env = std::getenv("LABELREC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

}  // namespace detail

// Runs trials for every (p, trial) grid point. Each trial derives its own
// seed from base_seed and (p_index, trial_index) only, so extending the grid
// never perturbs existing trials. Trials are independent and may execute on
// several threads (LABELREC_THREADS); records always come back in grid order.
inline ExperimentRun run_experiment(const ExperimentConfig& cfg) {
  ExperimentRun run;
  run.graph = generate_experiment_graph(cfg);
  const Graph& g = run.graph;

  const std::optional<Labeling> shared_truth =
      cfg.fixed_truth
          ? std::optional<Labeling>(sample_labels(g.n, derive_seed(cfg.base_seed, 0xf17ed)))
          : std::nullopt;

  const std::size_t total = cfg.p_grid.size() * std::size_t(cfg.trials);
  run.records.assign(total, {});

  auto run_one = [&](std::size_t flat) {
    const std::size_t pi = flat / std::size_t(cfg.trials);
    const int trial = int(flat % std::size_t(cfg.trials));
    const double p = cfg.p_grid[pi];
    const std::uint64_t seed =
        cfg.base_seed ^ mix64((std::uint64_t(pi) << 32) | std::uint64_t(trial));

    TrialRecord rec;
    rec.p = p;
    rec.q = cfg.q;
    rec.trial_index = trial;
    rec.seed = seed;

    const Labeling truth =
        shared_truth ? *shared_truth : sample_labels(g.n, derive_seed(seed, 1));
    const Observations obs =
        generate_observations(g, truth, {p, cfg.q}, derive_seed(seed, 2));
    RecoverOptions ro;
    ro.solve.seed = derive_seed(seed, 3);
    ro.truth = truth;

    const auto t0 = std::chrono::steady_clock::now();
    const PipelineResult res = recover(g, obs, ro);
    if (cfg.compare_brute_force) {
      const BruteForceResult bf = brute_force_max(obs);
      rec.brute_match = std::fabs(score_quadratic(res.labels, obs) - bf.value) <= 1e-6;
    }
    const auto t1 = std::chrono::steady_clock::now();

    rec.hamming = *res.hamming;
    rec.recovered = rec.hamming == 0;
    rec.sign_class_recovered = rec.hamming == 0 || rec.hamming == g.n;
    rec.certified = res.certified;
    rec.objective = res.objective;
    rec.wall_ms =
        cfg.record_timing
            ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
            : 0;
    run.records[flat] = rec;
  };

  const int threads = std::min<int>(detail::harness_thread_count(), int(total));
  if (threads <= 1) {
    for (std::size_t flat = 0; flat < total; ++flat) run_one(flat);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t flat = next.fetch_add(1); flat < total;
             flat = next.fetch_add(1))
          run_one(flat);
      });
    for (auto& th : pool) th.join();
  }
  return run;
}

// ---------------------------------------------------------------------------
// Output files.

namespace detail {

// Shortest round-trip decimal form; locale-free and stable across runs.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline std::string csv_string(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "p,q,trial,seed,recovered,sign_class_recovered,certified,hamming,"
         "objective,brute_match,wall_ms\n";
  for (const TrialRecord& r : records) {
    out << detail::format_double(r.p) << ',' << detail::format_double(r.q) << ','
        << r.trial_index << ',' << r.seed << ',' << int(r.recovered) << ','
        << int(r.sign_class_recovered) << ',' << int(r.certified) << ','
        << r.hamming << ',' << detail::format_double(r.objective) << ',';
    if (r.brute_match) out << int(*r.brute_match);
    out << ',' << r.wall_ms << '\n';
  }
  return out.str();
}

inline void write_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("write_csv: no records");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << csv_string(records);
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

struct SummaryPoint {
  double p = 0.0;
  double recovery_rate = 0.0;
  double certification_rate = 0.0;
  double mean_hamming = 0.0;
  std::optional<double> eps1;              // undefined for p outside (0, 0.5)
  std::optional<double> combined_success;  // 1 - eps1 - eps2 when both exist
  std::optional<bool> vacuous;             // eps1 > 1
};

struct Summary {
  std::string family;
  int n = 0;
  int edge_count = 0;
  int max_deg = 0;
  double q = 0.0;
  int trials = 0;
  std::uint64_t base_seed = 0;
  double phi_value = 0.0;
  std::string phi_source;  // closed-form | exact | spectral-lower
  std::optional<double> eps2;
  std::vector<SummaryPoint> points;
};

inline Summary build_summary(const ExperimentConfig& cfg, const ExperimentRun& run) {
  Summary s;
  s.family = cfg.family;
  s.n = run.graph.n;
  s.edge_count = int(run.graph.edges.size());
  s.max_deg = max_degree(run.graph);
  s.q = cfg.q;
  s.trials = cfg.trials;
  s.base_seed = cfg.base_seed;

  if (cfg.family == "complete") {
    s.phi_value = double((run.graph.n + 1) / 2);
    s.phi_source = "closed-form";
  } else if (run.graph.n <= 24) {
    s.phi_value = cheeger_exact(run.graph).expansion;
    s.phi_source = "exact";
  } else {
    s.phi_value = cheeger_spectral_bounds(run.graph).lower;
    s.phi_source = "spectral-lower";
  }
  if (cfg.q > 0.0 && cfg.q < 0.5) s.eps2 = stage2_failure_bound(s.n, cfg.q);

  for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
    SummaryPoint pt;
    pt.p = cfg.p_grid[pi];
    double rec = 0, cert = 0, ham = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      const TrialRecord& r = run.records[pi * std::size_t(cfg.trials) + t];
      rec += r.recovered;
      cert += r.certified;
      ham += r.hamming;
    }
    pt.recovery_rate = rec / cfg.trials;
    pt.certification_rate = cert / cfg.trials;
    pt.mean_hamming = ham / cfg.trials;
    if (pt.p > 0.0 && pt.p < 0.5 && s.phi_value > 0.0) {
      pt.eps1 = stage1_failure_bound(s.phi_value, s.max_deg, pt.p, s.n);
      pt.vacuous = *pt.eps1 > 1.0;
      if (s.eps2) pt.combined_success = 1.0 - *pt.eps1 - *s.eps2;
    }
    s.points.push_back(pt);
  }
  return s;
}

inline nlohmann::json summary_to_json(const Summary& s) {
  nlohmann::json j;
  j["family"] = s.family;
  j["n"] = s.n;
  j["q"] = s.q;
  j["trials"] = s.trials;
  j["base_seed"] = s.base_seed;
  j["graph"] = {{"n", s.n}, {"m", s.edge_count}, {"max_degree", s.max_deg}};
  j["phi"] = {{"value", s.phi_value}, {"source", s.phi_source}};
  j["eps2"] = s.eps2 ? nlohmann::json(*s.eps2) : nlohmann::json(nullptr);
  j["per_p"] = nlohmann::json::array();
  for (const SummaryPoint& pt : s.points) {
    nlohmann::json e;
    e["p"] = pt.p;
    e["recovery_rate"] = pt.recovery_rate;
    e["certification_rate"] = pt.certification_rate;
    e["mean_hamming"] = pt.mean_hamming;
    e["eps1"] = pt.eps1 ? nlohmann::json(*pt.eps1) : nlohmann::json(nullptr);
    e["combined_success"] =
        pt.combined_success ? nlohmann::json(*pt.combined_success) : nlohmann::json(nullptr);
    e["vacuous"] = pt.vacuous ? nlohmann::json(*pt.vacuous) : nlohmann::json(nullptr);
    j["per_p"].push_back(e);
  }
  return j;
}

inline void write_summary_json(const Summary& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << summary_to_json(s).dump(2) << '\n';
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

// Self-contained SVG line chart: recovery and certification rates over the
// p grid, with the 1 - eps1 - eps2 curve overlaid where it is non-vacuous.
inline void plot_svg(const Summary& s, const std::string& path) {
  if (s.points.size() < 2)
    throw std::invalid_argument(
        "plot_svg: need at least 2 grid points to draw a curve; got " +
        std::to_string(s.points.size()) + " (run a sweep with a larger p_grid)");
  double pmin = s.points.front().p, pmax = s.points.front().p;
  for (const auto& pt : s.points) {
    pmin = std::min(pmin, pt.p);
    pmax = std::max(pmax, pt.p);
  }
  if (!(pmax > pmin))
    throw std::invalid_argument("plot_svg: p grid points must not all coincide");

  const double W = 720, H = 480, L = 70, R = 24, T = 36, B = 56;
  const double pw = W - L - R, ph = H - T - B;
  auto sx = [&](double p) { return L + (p - pmin) / (pmax - pmin) * pw; };
  auto sy = [&](double r) { return T + (1.0 - r) * ph; };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
      << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << s.family << " n=" << s.n << ", q=" << s.q << ", " << s.trials
      << " trials per point</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double r = i / 4.0;
    svg << "<line x1=\"" << L << "\" y1=\"" << fmt(sy(r)) << "\" x2=\"" << W - R
        << "\" y2=\"" << fmt(sy(r)) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << L - 8 << "\" y=\"" << fmt(sy(r) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(r) << "</text>\n";
  }
  for (const auto& pt : s.points) {
    svg << "<line x1=\"" << fmt(sx(pt.p)) << "\" y1=\"" << T << "\" x2=\""
        << fmt(sx(pt.p)) << "\" y2=\"" << H - B << "\" stroke=\"#eeeeee\"/>\n";
    svg << "<text x=\"" << fmt(sx(pt.p)) << "\" y=\"" << H - B + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << detail::format_double(pt.p) << "</text>\n";
  }
  svg << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  svg << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
         "edge noise p</text>\n";
  svg << "<text x=\"18\" y=\"" << T + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 18 "
      << T + ph / 2 << ")\">rate</text>\n";

  auto polyline = [&](auto value, const char* color, const char* dash) {
    std::ostringstream pts;
    bool any = false;
    for (const auto& pt : s.points) {
      const std::optional<double> v = value(pt);
      if (!v) continue;
      pts << fmt(sx(pt.p)) << ',' << fmt(sy(std::clamp(*v, 0.0, 1.0))) << ' ';
      any = true;
    }
    if (!any) return false;
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (dash[0] != '\0') svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " points=\"" << pts.str() << "\"/>\n";
    return true;
  };

  polyline([](const SummaryPoint& pt) { return std::optional<double>(pt.recovery_rate); },
           "#1f77b4", "");
  polyline(
      [](const SummaryPoint& pt) { return std::optional<double>(pt.certification_rate); },
      "#ff7f0e", "6,3");
  const bool bound_drawn = polyline(
      [](const SummaryPoint& pt) -> std::optional<double> {
        if (!pt.combined_success || !pt.vacuous || *pt.vacuous) return std::nullopt;
        return pt.combined_success;
      },
      "#2ca02c", "2,3");

  const double lx = W - R - 196, ly = T + 10;
  svg << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"188\" height=\"62\" "
         "fill=\"white\" stroke=\"#999999\"/>\n";
  auto legend = [&](int row, const char* color, const std::string& label) {
    const double y = ly + 14 + row * 16;
    svg << "<line x1=\"" << lx + 8 << "\" y1=\"" << y - 4 << "\" x2=\"" << lx + 32
        << "\" y2=\"" << y - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << lx + 38 << "\" y=\"" << y
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << label << "</text>\n";
  };
  legend(0, "#1f77b4", "recovery rate");
  legend(1, "#ff7f0e", "certification rate");
  if (bound_drawn)
    legend(2, "#2ca02c", "1 - eps1 - eps2");
  else
    svg << "<text x=\"" << lx + 8 << "\" y=\"" << ly + 14 + 2 * 16
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#888888\">"
           "bound vacuous</text>\n";
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << svg.str();
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

struct SweepOutputs {
  std::string csv_path;
  std::string summary_path;
  std::string svg_path;  // empty when the grid cannot be plotted
  Summary summary;
};

// Runs the experiment and writes <output>.csv, <output>_summary.json and,
// when the grid has at least two distinct p values, <output>.svg.
inline SweepOutputs run_sweep(const ExperimentConfig& cfg,
                              const std::string& output_override = "") {
  const std::string base = output_override.empty() ? cfg.output_path : output_override;
  const std::filesystem::path parent = std::filesystem::path(base).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);

  const ExperimentRun run = run_experiment(cfg);
  SweepOutputs out;
  out.summary = build_summary(cfg, run);
  out.csv_path = base + ".csv";
  write_csv(run.records, out.csv_path);
  out.summary_path = base + "_summary.json";
  write_summary_json(out.summary, out.summary_path);

  double pmin = cfg.p_grid.front(), pmax = cfg.p_grid.front();
  for (double p : cfg.p_grid) {
    pmin = std::min(pmin, p);
    pmax = std::max(pmax, p);
  }
  if (cfg.p_grid.size() >= 2 && pmax > pmin) {
    out.svg_path = base + ".svg";
    plot_svg(out.summary, out.svg_path);
  }
  return out;
}

}  // namespace labelrec
