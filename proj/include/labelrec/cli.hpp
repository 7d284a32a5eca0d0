#pragma once

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "labelrec/bounds.hpp"
#include "labelrec/graph.hpp"
#include "labelrec/harness.hpp"
#include "labelrec/io.hpp"
#include "labelrec/observe.hpp"
#include "labelrec/solve.hpp"
#include "labelrec/spectral.hpp"

namespace labelrec {

namespace detail {

// Errors caused by an inconsistent flag combination rather than by execution.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string rational_string(long long num, long long den) {
  const long long g = std::gcd(num, den);
  const long long rn = g ? num / g : num, rd = g ? den / g : den;
  if (rd == 1) return std::to_string(rn);
  return std::to_string(rn) + "/" + std::to_string(rd);
}

inline std::string yes_no(bool v) { return v ? "yes" : "no"; }

}  // namespace detail

// Exit codes: 0 success, 1 usage error, 2 runtime error. `args` excludes the
// program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"two-stage label recovery on noisy graphs"};
  app.require_subcommand(1);

  // generate
  auto* cmd_gen = app.add_subcommand("generate", "write a graph file for a family");
  std::string gen_family, gen_base_family, gen_out;
  int gen_n = 0, gen_rows = 0, gen_cols = 0, gen_d = 0;
  double gen_prob = 0.0, gen_epsilon = 0.0;
  std::uint64_t gen_seed = 1;
  cmd_gen->add_option("--family", gen_family,
                      "complete|cycle|grid|regular|er|smoothed")
      ->required();
  cmd_gen->add_option("--n", gen_n, "vertex count");
  cmd_gen->add_option("--rows", gen_rows, "grid rows");
  cmd_gen->add_option("--cols", gen_cols, "grid cols");
  cmd_gen->add_option("--d", gen_d, "regular degree");
  cmd_gen->add_option("--prob", gen_prob, "er edge probability");
  cmd_gen->add_option("--epsilon", gen_epsilon, "smoothed: expected added degree");
  cmd_gen->add_option("--base-family", gen_base_family, "smoothed: base family");
  cmd_gen->add_option("--seed", gen_seed, "random seed");
  cmd_gen->add_option("--out", gen_out, "output graph file")->required();

  // observe
  auto* cmd_obs = app.add_subcommand("observe", "sample noisy observations for a graph");
  std::string obs_graph, obs_out, obs_truth_in, obs_truth_out;
  double obs_p = 0.0, obs_q = 0.0;
  std::uint64_t obs_seed = 1;
  cmd_obs->add_option("--graph", obs_graph, "graph file")->required();
  cmd_obs->add_option("--p", obs_p, "edge flip probability")->required();
  cmd_obs->add_option("--q", obs_q, "node flip probability")->required();
  cmd_obs->add_option("--seed", obs_seed, "random seed");
  cmd_obs->add_option("--out", obs_out, "output observations file")->required();
  cmd_obs->add_option("--truth-in", obs_truth_in,
                      "labels file to use as ground truth (default: sampled)");
  cmd_obs->add_option("--truth-out", obs_truth_out, "write the ground truth here");

  // recover
  auto* cmd_rec = app.add_subcommand("recover", "run the two-stage pipeline");
  std::string rec_graph, rec_obs, rec_truth, rec_labels_out;
  std::uint64_t rec_seed = 1;
  double rec_p = -1.0, rec_q = -1.0;
  cmd_rec->add_option("--graph", rec_graph, "graph file")->required();
  cmd_rec->add_option("--obs", rec_obs, "observations file")->required();
  cmd_rec->add_option("--seed", rec_seed, "solver seed");
  cmd_rec->add_option("--truth", rec_truth, "labels file; prints hamming distance");
  cmd_rec->add_option("--p", rec_p, "edge noise, enables the weighted full score");
  cmd_rec->add_option("--q", rec_q, "node noise, enables the weighted full score");
  cmd_rec->add_option("--labels-out", rec_labels_out, "write recovered labels here");

  // certify
  auto* cmd_cert = app.add_subcommand("certify", "check a labeling's optimality certificate");
  std::string cert_graph, cert_obs, cert_labels;
  cmd_cert->add_option("--graph", cert_graph, "graph file")->required();
  cmd_cert->add_option("--obs", cert_obs, "observations file")->required();
  cmd_cert->add_option("--labels", cert_labels, "labels file")->required();

  // cheeger
  auto* cmd_chg = app.add_subcommand("cheeger", "edge expansion, exact or spectral bounds");
  std::string chg_graph;
  cmd_chg->add_option("--graph", chg_graph, "graph file")->required();

  // bounds
  auto* cmd_bnd = app.add_subcommand("bounds", "failure-probability bound table");
  int bnd_n = 0, bnd_dmax = 0;
  double bnd_phi = 0.0, bnd_q = 0.0;
  std::vector<double> bnd_p;
  std::string bnd_family;
  cmd_bnd->add_option("--n", bnd_n, "vertex count")->required();
  cmd_bnd->add_option("--p", bnd_p, "edge noise values (repeatable)")->required();
  cmd_bnd->add_option("--q", bnd_q, "node noise")->required();
  cmd_bnd->add_option("--phi", bnd_phi, "edge expansion");
  cmd_bnd->add_option("--dmax", bnd_dmax, "maximum degree");
  cmd_bnd->add_option("--family", bnd_family, "'complete' derives phi and dmax from n");

  // sweep
  auto* cmd_swp = app.add_subcommand("sweep", "run a Monte Carlo sweep from a config");
  std::string swp_config, swp_output;
  cmd_swp->add_option("config", swp_config, "experiment config JSON")->required();
  cmd_swp->add_option("--output", swp_output, "override the config's output path");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return 1;
  }

  try {
    if (app.got_subcommand(cmd_gen)) {
      nlohmann::json params = nlohmann::json::object();
      int n = gen_n;
      if (gen_family == "grid") {
        if (gen_rows < 1 || gen_cols < 1)
          throw detail::usage_error("generate: grid needs --rows and --cols");
        params["rows"] = gen_rows;
        params["cols"] = gen_cols;
        n = gen_rows * gen_cols;
      } else if (n < 1) {
        throw detail::usage_error("generate: --n is required for family '" + gen_family + "'");
      }
      if (gen_family == "regular") {
        if (!cmd_gen->count("--d")) throw detail::usage_error("generate: regular needs --d");
        params["d"] = gen_d;
      }
      if (gen_family == "er") {
        if (!cmd_gen->count("--prob")) throw detail::usage_error("generate: er needs --prob");
        params["prob"] = gen_prob;
      }
      if (gen_family == "smoothed") {
        if (gen_base_family.empty() || !cmd_gen->count("--epsilon"))
          throw detail::usage_error("generate: smoothed needs --base-family and --epsilon");
        params["base_family"] = gen_base_family;
        params["epsilon"] = gen_epsilon;
        if (cmd_gen->count("--d")) params["d"] = gen_d;
        if (cmd_gen->count("--prob")) params["prob"] = gen_prob;
        if (cmd_gen->count("--rows")) params["rows"] = gen_rows;
        if (cmd_gen->count("--cols")) params["cols"] = gen_cols;
      }
      const Graph g = build_family_graph(gen_family, params, n, gen_seed);
      save_graph(gen_out, g);
      out << "wrote " << gen_out << " (n=" << g.n << ", m=" << g.edges.size() << ")\n";
      return 0;
    }

    if (app.got_subcommand(cmd_obs)) {
      const Graph g = load_graph(obs_graph);
      const Labeling truth = obs_truth_in.empty()
                                 ? sample_labels(g.n, derive_seed(obs_seed, 1))
                                 : load_labels(obs_truth_in);
      validate_labels(truth, g.n, "truth");
      const Observations o =
          generate_observations(g, truth, {obs_p, obs_q}, derive_seed(obs_seed, 2));
      save_observations(obs_out, o);
      out << "wrote " << obs_out << " (n=" << o.n << ", m=" << o.edges.size() << ")\n";
      if (!obs_truth_out.empty()) {
        save_labels(obs_truth_out, truth);
        out << "wrote " << obs_truth_out << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(cmd_rec)) {
      const bool has_p = cmd_rec->count("--p") > 0, has_q = cmd_rec->count("--q") > 0;
      if (has_p != has_q)
        throw detail::usage_error("recover: --p and --q must be given together");
      const Graph g = load_graph(rec_graph);
      const Observations o = load_observations(rec_obs);
      RecoverOptions ro;
      ro.solve.seed = rec_seed;
      if (!rec_truth.empty()) {
        Labeling truth = load_labels(rec_truth);
        validate_labels(truth, g.n, "truth");
        ro.truth = std::move(truth);
      }
      const PipelineResult res = recover(g, o, ro);
      out << "labels:";
      for (int v : res.labels) out << ' ' << v;
      out << "\n";
      out << "objective: " << detail::fmt_g(res.objective) << "\n";
      out << "certified: " << detail::yes_no(res.certified) << " (lambda1="
          << detail::fmt_g(res.certificate.lambda1)
          << ", lambda2=" << detail::fmt_g(res.certificate.lambda2)
          << ", tol=" << detail::fmt_g(res.certificate.tolerance) << ")\n";
      out << "stage2_flipped: " << detail::yes_no(res.stage2_flipped) << "\n";
      out << "solver_converged: " << detail::yes_no(res.solver_converged) << "\n";
      out << "score_quadratic: " << detail::fmt_g(score_quadratic(res.labels, o)) << "\n";
      if (has_p) {
        const double w = unary_weight({rec_p, rec_q});
        out << "score_full: " << detail::fmt_g(score_full(res.labels, o, w))
            << " (weight=" << detail::fmt_g(w) << ")\n";
      }
      if (res.hamming) out << "hamming: " << *res.hamming << "\n";
      if (!rec_labels_out.empty()) save_labels(rec_labels_out, res.labels);
      return 0;
    }

    if (app.got_subcommand(cmd_cert)) {
      const Graph g = load_graph(cert_graph);
      const Observations o = load_observations(cert_obs);
      if (o.n != g.n || o.edges != g.edges)
        throw std::runtime_error("certify: observations do not match the graph's edge set");
      const Labeling y = load_labels(cert_labels);
      validate_labels(y, g.n);
      const CertificateReport rep = build_certificate(o, y);
      out << "certified: " << detail::yes_no(rep.certified) << "\n";
      out << "lambda1: " << detail::fmt_g(rep.lambda1) << "\n";
      out << "lambda2: " << detail::fmt_g(rep.lambda2) << "\n";
      out << "tolerance: " << detail::fmt_g(rep.tolerance) << "\n";
      return 0;
    }

    if (app.got_subcommand(cmd_chg)) {
      const Graph g = load_graph(chg_graph);
      if (g.n <= 24) {
        const CutReport r = cheeger_exact(g);
        out << "phi=" << detail::rational_string(r.expansion_num, r.expansion_den)
            << " (|S|=" << r.expansion_den << ", cut=" << r.cut_edges << ")\n";
        out << "S = {";
        for (std::size_t i = 0; i < r.best_set.size(); ++i)
          out << (i ? ", " : "") << r.best_set[i];
        out << "}\n";
      } else {
        const SpectralBounds b = cheeger_spectral_bounds(g);
        out << "phi in [" << detail::fmt_g(b.lower) << ", " << detail::fmt_g(b.upper)
            << "] (spectral bounds; n=" << g.n << " is too large for exact search)\n";
      }
      return 0;
    }

    if (app.got_subcommand(cmd_bnd)) {
      double phi = bnd_phi;
      int dmax = bnd_dmax;
      if (bnd_family == "complete") {
        phi = double((bnd_n + 1) / 2);
        dmax = bnd_n - 1;
      } else if (!bnd_family.empty()) {
        throw detail::usage_error("bounds: only --family complete is supported");
      } else if (!cmd_bnd->count("--phi") || !cmd_bnd->count("--dmax")) {
        throw detail::usage_error("bounds: give --phi and --dmax, or --family complete");
      }
      out << "n phi dmax p q eps1 eps2 combined vacuous\n";
      for (double p : bnd_p) {
        const RecoveryBounds b = combined_bounds(phi, dmax, bnd_n, p, bnd_q);
        out << bnd_n << ' ' << detail::fmt_g(phi) << ' ' << dmax << ' '
            << detail::fmt_g(p) << ' ' << detail::fmt_g(bnd_q) << ' '
            << detail::fmt_g(b.stage1_failure) << ' ' << detail::fmt_g(b.stage2_failure)
            << ' ' << detail::fmt_g(b.combined_success) << ' '
            << detail::yes_no(b.vacuous) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(cmd_swp)) {
      const ExperimentConfig cfg = load_experiment_config(swp_config);
      const SweepOutputs res = run_sweep(cfg, swp_output);
      for (const SummaryPoint& pt : res.summary.points) {
        out << "p=" << detail::fmt_g(pt.p)
            << " recovery=" << detail::fmt_g(pt.recovery_rate)
            << " certified=" << detail::fmt_g(pt.certification_rate)
            << " mean_hamming=" << detail::fmt_g(pt.mean_hamming);
        if (pt.eps1) out << " eps1=" << detail::fmt_g(*pt.eps1);
        out << "\n";
      }
      out << "csv: " << res.csv_path << "\n";
      out << "summary: " << res.summary_path << "\n";
      if (!res.svg_path.empty()) out << "svg: " << res.svg_path << "\n";
      return 0;
    }

    err << "usage error: no subcommand given\n";
    return 1;
  } catch (const detail::usage_error& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace labelrec
