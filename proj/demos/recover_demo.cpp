// End-to-end walkthrough: sample a noisy instance on K12, run the two-stage
// pipeline, and compare what happened against the closed-form bounds.

#include <cstdio>

#include "labelrec/labelrec.hpp"

int main() {
  using namespace labelrec;

  const Graph g = complete(12);
  const Labeling truth = sample_labels(g.n, 7);
  const NoiseParams noise{0.1, 0.15};
  const Observations obs = generate_observations(g, truth, noise, 42);

  RecoverOptions opts;
  opts.solve.seed = 3;
  opts.truth = truth;
  const PipelineResult res = recover(g, obs, opts);

  std::printf("objective        %.4f\n", res.objective);
  std::printf("certified        %s (lambda2=%.4f)\n", res.certified ? "yes" : "no",
              res.certificate.lambda2);
  std::printf("stage2 flipped   %s\n", res.stage2_flipped ? "yes" : "no");
  std::printf("hamming error    %d\n", *res.hamming);

  const CutReport cut = cheeger_exact(g);
  const RecoveryBounds b =
      combined_bounds(cut.expansion, max_degree(g), g.n, noise.p, noise.q);
  std::printf("phi=%g dmax=%d  eps1=%.4g eps2=%.4g%s\n", cut.expansion, max_degree(g),
              b.stage1_failure, b.stage2_failure, b.vacuous ? "  (vacuous)" : "");
  return 0;
}
