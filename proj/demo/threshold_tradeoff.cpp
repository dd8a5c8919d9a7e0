// Prints the energy/accuracy trade-off of the default scenario and the
// cheapest threshold meeting a 98% retrieval-accuracy target.

#include <cstdio>

#include "tinyairnet/tinyairnet.hpp"

int main() {
  using namespace tinyairnet;
  Scenario s = presets::default_scenario();

  std::printf("%8s %12s %10s %10s\n", "v_th", "E_total[J]", "gamma", "E[tx]");
  for (double v = 0.5; v <= 1.0; v += 0.0625) {
    s.v_th = v;
    const AnalyticalResult r = analyze(s);
    std::printf("%8.4f %12.4f %10.4f %10.3f\n", v, r.e_total, r.gamma, r.expected_tx_count);
  }

  const OptimizationResult opt = find_optimal_threshold(s, 0.98);
  if (opt.feasible())
    std::printf("\noptimal v_th = %.8f  E = %.4f J  baseline = %.4f J  eta = %.4f\n", *opt.v_th_opt,
                opt.e_total_at_opt, opt.e_baseline, opt.eta);
  else
    std::printf("\nno threshold meets the accuracy target\n");
  return 0;
}
