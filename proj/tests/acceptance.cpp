// Acceptance suite: one self-contained check per shipped guarantee, each
// printed as a PASS/FAIL line with its runtime. Exits nonzero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "labelrec/cli.hpp"
#include "labelrec/labelrec.hpp"

using namespace labelrec;

namespace {

struct check_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& msg) {
  if (!ok) throw check_failure(msg);
}

Graph random_connected(SplitMix64& rng, int nmin, int nmax) {
  for (;;) {
    const int n = nmin + int(rng.below(std::uint64_t(nmax - nmin + 1)));
    const Graph g = erdos_renyi(n, 0.3 + 0.6 * rng.uniform(), rng.next_u64());
    if (is_connected(g)) return g;
  }
}

Labeling random_pm1(SplitMix64& rng, int n) {
  Labeling y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.uniform() < 0.5 ? -1 : +1;
  return y;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  expect(bool(in), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Independent long-double evaluations of the two failure-bound formulas.
long double stage1_reference(long double phi, long double dmax, long double p,
                             long double n) {
  const long double t = 1.0L - 2.0L * p;
  const long double a = 1536.0L * dmax * dmax * dmax * p * (1.0L - p);
  const long double b = 32.0L * t * (1.0L - p) * (phi * phi) * dmax;
  return 2.0L * n * std::exp(-(3.0L * t * t * (phi * phi) * (phi * phi)) / (a + b));
}
long double stage2_reference(long double n, long double q) {
  const long double t = 1.0L - 2.0L * q;
  return std::exp(-(n / 2.0L) * t * t);
}

// ---------------------------------------------------------------------------

// 1. Exact expansion of complete graphs equals ceil(n/2) for n in [3, 12].
void check_complete_expansion() {
  for (int n = 3; n <= 12; ++n) {
    const CutReport r = cheeger_exact(complete(n));
    expect(r.expansion == double((n + 1) / 2),
           "K" + std::to_string(n) + " expansion " + std::to_string(r.expansion));
    expect(r.expansion_den * ((n + 1) / 2) == r.expansion_num,
           "K" + std::to_string(n) + " rational mismatch");
  }
}

// 2. phi^2/(4 dmax) lower-bounds lambda2 of the signed Laplacian on 1000
//    random (connected graph n <= 10, labeling) pairs.
void check_expansion_eigen_bound() {
  SplitMix64 rng(0xACC2);
  int violations = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Graph g = random_connected(rng, 2, 10);
    const Labeling y = random_pm1(rng, g.n);
    const ExpansionEigenBound r = expansion_lambda2_bound(g, y);
    if (!(r.expansion_bound <= r.lambda2 + 1e-9)) ++violations;
  }
  expect(violations == 0, std::to_string(violations) + " violations");
}

// 3. Folded Rayleigh quotient never exceeds the signed quotient on 1000
//    random valid inputs.
void check_folded_rayleigh() {
  SplitMix64 rng(0xACC3);
  int violations = 0, done = 0;
  while (done < 1000) {
    const int n = 2 + int(rng.below(13));
    const Graph g = erdos_renyi(n, rng.uniform(), rng.next_u64());
    const Labeling y = random_pm1(rng, n);
    std::vector<double> a(n);
    for (double& v : a) v = 2.0 * rng.uniform() - 1.0;
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += a[i] * y[i];
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      a[i] -= dot * y[i] / n;
      norm += a[i] * a[i];
    }
    if (norm < 1e-6) continue;
    const double delta = 4.0 * rng.uniform() - 2.0;
    const FoldedRayleigh r = folded_rayleigh(g, y, a, delta);
    if (!(r.laplacian_quotient <= r.signed_quotient + 1e-9)) ++violations;
    ++done;
  }
  expect(violations == 0, std::to_string(violations) + " violations");
}

// 4. Over 500 seeded trials on {complete, cycle, grid, 3-regular} graphs with
//    n <= 12 and p in {0.05, 0.15, 0.3}, every certified trial attains the
//    exhaustive optimum up to global sign.
void check_certificate_soundness() {
  SplitMix64 rng(0xACC4);
  const double p_grid[3] = {0.05, 0.15, 0.3};
  int certified = 0;
  for (int rep = 0; rep < 500; ++rep) {
    Graph g;
    switch (rep % 4) {
      case 0: g = complete(4 + int(rng.below(9))); break;
      case 1: g = cycle(4 + int(rng.below(9))); break;
      case 2: g = (rng.below(2) ? grid(3, 4) : grid(2, 5)); break;
      default: g = random_regular(6 + 2 * int(rng.below(4)), 3, rng.next_u64());
    }
    const double p = p_grid[rep % 3];
    const Labeling truth = random_pm1(rng, g.n);
    const Observations obs = generate_observations(g, truth, {p, 0.1}, rng.next_u64());
    RecoverOptions ro;
    ro.solve.seed = rng.next_u64();
    const PipelineResult res = recover(g, obs, ro);
    if (!res.certified) continue;
    ++certified;
    const BruteForceResult bf = brute_force_max(obs);
    expect(std::fabs(score_quadratic(res.labels, obs) - bf.value) <= 1e-9,
           "certified labels miss the exhaustive optimum at trial " + std::to_string(rep));
  }
  expect(certified > 0, "no trial certified");
}

// 5. Noiseless instances recover and certify on 100/100 trials per family,
//    n in [6, 12].
void check_noiseless_completeness() {
  SplitMix64 rng(0xACC5);
  const char* families[4] = {"complete", "cycle", "grid", "regular"};
  for (int f = 0; f < 4; ++f) {
    for (int t = 0; t < 100; ++t) {
      Graph g;
      switch (f) {
        case 0: g = complete(6 + t % 7); break;
        case 1: g = cycle(6 + t % 7); break;
        case 2: {
          const int pick = t % 4;
          g = pick == 0 ? grid(2, 3) : pick == 1 ? grid(2, 4) : pick == 2 ? grid(3, 3)
                                                                          : grid(3, 4);
          break;
        }
        default: g = random_regular(6 + 2 * (t % 4), 3, rng.next_u64());
      }
      const Labeling truth = random_pm1(rng, g.n);
      const Observations obs = generate_observations(g, truth, {0.0, 0.0}, rng.next_u64());
      RecoverOptions ro;
      ro.solve.seed = rng.next_u64();
      ro.truth = truth;
      const PipelineResult res = recover(g, obs, ro);
      expect(res.certified && *res.hamming == 0,
             std::string(families[f]) + " trial " + std::to_string(t) +
                 ": hamming=" + std::to_string(*res.hamming) +
                 " certified=" + (res.certified ? "yes" : "no"));
    }
  }
}

// 6. With n = 20, q = 0.3 and 10^4 node-observation draws, the frequency of
//    the node score failing to strictly prefer the truth stays below
//    e^{-1.6} and lands within 4 sigma of the exact binomial tail
//    P(Bin(20, 0.3) >= 10).
void check_sign_selection_bound() {
  const int n = 20, draws = 10000;
  const double q = 0.3;
  SplitMix64 rng(0xACC6);
  const Labeling truth = random_pm1(rng, n);
  int bad = 0;
  for (int t = 0; t < draws; ++t) {
    Labeling c(n);
    for (int u = 0; u < n; ++u)
      c[u] = truth[u] * sample_biased_rademacher(q, rng);
    long long dot = 0;
    for (int u = 0; u < n; ++u) dot += (long long)(c[u] * truth[u]);
    bad += dot <= 0;  // stage 2 cannot strictly prefer the truth
  }
  const double freq = double(bad) / draws;

  const double bound = stage2_failure_bound(n, q);
  expect(std::fabs(bound - std::exp(-1.6)) < 1e-15, "bound formula drifted");
  expect(freq <= bound, "frequency " + std::to_string(freq) + " exceeds bound " +
                            std::to_string(bound));

  // Exact binomial tail by direct summation.
  long double tail = 0.0L;
  for (int k = 10; k <= n; ++k) {
    long double c = 1.0L;
    for (int i = 0; i < k; ++i) c = c * (long double)(n - i) / (long double)(i + 1);
    tail += c * std::pow(0.3L, k) * std::pow(0.7L, n - k);
  }
  const double pt = double(tail);
  const double sigma = std::sqrt(pt * (1.0 - pt) / draws);
  expect(std::fabs(freq - pt) <= 4.0 * sigma,
         "frequency " + std::to_string(freq) + " vs exact tail " + std::to_string(pt));
}

// 7. The two bound formulas match an independently coded long-double
//    evaluation to 12 significant digits on a 100-point grid, and are
//    monotone (decreasing in phi, increasing in p, decreasing in n).
void check_formula_fidelity() {
  const double phis[5] = {0.5, 2, 5, 11, 20};
  const int dmaxs[4] = {1, 4, 15, 60};
  const double ps[5] = {0.03, 0.1, 0.2, 0.35, 0.48};
  for (double phi : phis)
    for (int dmax : dmaxs)
      for (double p : ps) {
        const double lib = stage1_failure_bound(phi, dmax, p, 64);
        const double ref = double(stage1_reference(phi, dmax, p, 64));
        expect(std::fabs(lib - ref) <= 1e-12 * std::fabs(ref), "stage1 mismatch");
      }
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 5; ++j) {
      const int n = 4 + 37 * i;
      const double q = 0.05 + 0.09 * j;
      const double lib = stage2_failure_bound(n, q);
      const double ref = double(stage2_reference(n, q));
      expect(std::fabs(lib - ref) <= 1e-12 * std::fabs(ref), "stage2 mismatch");
    }

  double prev = 1e300;
  for (double phi = 0.25; phi <= 12.0; phi += 0.25) {
    const double v = stage1_failure_bound(phi, 8, 0.2, 64);
    expect(v < prev, "stage1 not decreasing in phi");
    prev = v;
  }
  prev = 0.0;
  for (double p = 0.01; p < 0.5; p += 0.01) {
    const double v = stage1_failure_bound(5.0, 8, p, 64);
    expect(v > prev, "stage1 not increasing in p");
    prev = v;
  }
  prev = 1.0;
  for (int n = 5; n <= 400; n += 5) {
    const double v = stage2_failure_bound(n, 0.22);
    expect(v < prev, "stage2 not decreasing in n");
    prev = v;
  }
}

// 8. The bound table for K100 at p = 0.1 reports a stage-1 bound above 1,
//    flagged vacuous, both through the API and the CLI table.
void check_vacuity_honesty() {
  const RecoveryBounds b = combined_bounds(50.0, 99, 100, 0.1, 0.1);
  expect(b.stage1_failure > 1.0, "stage1 bound unexpectedly below 1");
  expect(b.vacuous, "vacuous flag not set");

  std::ostringstream out, err;
  const int code = run_cli({"bounds", "--n", "100", "--p", "0.1", "--q", "0.1",
                            "--family", "complete"},
                           out, err);
  expect(code == 0, "bounds subcommand failed: " + err.str());
  expect(out.str().find(" yes") != std::string::npos, "table lacks the vacuous flag");
  expect(out.str().find("183.55") != std::string::npos,
         "table lacks the expected bound value: " + out.str());
}

// 9. Adding ER(n, 8/n) edges to a ring raises the spectral expansion lower
//    bound lambda2/2 in at least 95 of 100 seeded draws for each size.
void check_smoothing_trend() {
  for (int n : {200, 500, 1000}) {
    const Graph base = cycle(n);
    const double base_lower = cheeger_spectral_bounds(base).lower;
    int wins = 0;
    for (int draw = 0; draw < 100; ++draw) {
      const Graph sm = smooth(base, 8.0, derive_seed(0xACC9, std::uint64_t(n) * 1000 + draw));
      if (cheeger_spectral_bounds(sm).lower > base_lower) ++wins;
    }
    expect(wins >= 95, "n=" + std::to_string(n) + ": only " + std::to_string(wins) +
                           "/100 draws improved the bound");
  }
}

// 10. Re-running the shipped example sweep reproduces the committed CSV
//     byte for byte.
void check_sweep_determinism() {
  const std::string src = LABELREC_SOURCE_DIR;
  const ExperimentConfig cfg = load_experiment_config(src + "/configs/k12.json");
  const std::filesystem::path tmp =
      std::filesystem::temp_directory_path() / "labelrec_acceptance";
  std::filesystem::remove_all(tmp);

  const SweepOutputs a = run_sweep(cfg, (tmp / "first/k12").string());
  const SweepOutputs b = run_sweep(cfg, (tmp / "second/k12").string());
  const std::string csv_a = slurp(a.csv_path);
  expect(csv_a == slurp(b.csv_path), "re-run produced different CSV bytes");

  const std::string golden = slurp(src + "/tests/golden/k12.csv");
  expect(csv_a == golden, "CSV differs from the committed golden file");
  std::filesystem::remove_all(tmp);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void()> fn;
    double limit_s;  // stated runtime budget; 0 = none
  };
  const std::vector<Criterion> criteria = {
      {"complete-graph expansion equals ceil(n/2)", check_complete_expansion, 5},
      {"signed-Laplacian lambda2 dominates phi^2/(4 dmax)", check_expansion_eigen_bound, 60},
      {"folded Rayleigh quotient never exceeds the signed quotient", check_folded_rayleigh, 0},
      {"certified labels always attain the exhaustive optimum", check_certificate_soundness, 300},
      {"noiseless instances recover and certify on every family", check_noiseless_completeness, 0},
      {"sign-selection failures obey the bound and the binomial oracle", check_sign_selection_bound, 10},
      {"failure-bound formulas match independent evaluation, monotone", check_formula_fidelity, 0},
      {"K100 bound table reports a vacuous stage-1 bound", check_vacuity_honesty, 0},
      {"smoothing lifts the ring's spectral expansion bound", check_smoothing_trend, 300},
      {"shipped sweep reproduces the golden CSV byte for byte", check_sweep_determinism, 0},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      criteria[i].fn();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && criteria[i].limit_s > 0 && secs > criteria[i].limit_s) {
      ok = false;
      detail = "runtime " + std::to_string(secs) + "s exceeds " +
               std::to_string(criteria[i].limit_s) + "s";
    }
    std::printf("%s %2zu. %-62s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, secs, detail.empty() ? "" : "  -- ",
                detail.c_str());
    std::fflush(stdout);
    failures += !ok;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
