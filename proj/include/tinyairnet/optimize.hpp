#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tinyairnet/analytics.hpp"

namespace tinyairnet {

inline constexpr double kDefaultGridStep = 1.0 / 256.0;

struct OptimizationResult {
  std::optional<double> v_th_opt;  // empty when no grid point meets gamma_th
  double e_total_at_opt{0.0};
  double gamma_at_opt{0.0};
  double eta{0.0};
  double e_baseline{0.0};
  double grid_step{kDefaultGridStep};
  std::uint64_t feasible_count{0};

  bool feasible() const { return v_th_opt.has_value(); }
};

// Grid {k * step} ∩ [0,1], endpoints included.
inline std::vector<double> threshold_grid(double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid_step must be > 0");
  const auto last = static_cast<std::uint64_t>(std::floor(1.0 / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(last + 1);
  for (std::uint64_t k = 0; k <= last; ++k) grid.push_back(std::min(1.0, static_cast<double>(k) * step));
  return grid;
}

// Minimizes expected total energy over the threshold grid subject to
// retrieval accuracy >= gamma_th. Equal-energy ties go to the larger
// threshold.
inline OptimizationResult find_optimal_threshold(const Scenario& base, double gamma_th,
                                                 double grid_step = kDefaultGridStep) {
  if (!(gamma_th >= 0.0 && gamma_th <= 1.0)) throw std::invalid_argument("gamma_th must lie in [0,1]");
  const std::vector<double> grid = threshold_grid(grid_step);

  OptimizationResult best;
  best.grid_step = grid_step;
  best.e_baseline = baseline_energy(base);
  Scenario s = base;
  for (double v : grid) {
    s.v_th = v;
    const double gamma = retrieval_accuracy(s);
    if (gamma < gamma_th) continue;
    ++best.feasible_count;
    const double e = expected_total_energy(s);
    if (!best.v_th_opt || e <= best.e_total_at_opt) {
      best.v_th_opt = v;
      best.e_total_at_opt = e;
      best.gamma_at_opt = gamma;
    }
  }
  if (best.v_th_opt && best.e_baseline > 0.0) best.eta = best.e_total_at_opt / best.e_baseline;
  else best.eta = std::numeric_limits<double>::quiet_NaN();
  return best;
}

// Optimizes each N independently; results are keyed by N.
inline std::map<std::uint64_t, OptimizationResult> sweep_n(const std::vector<std::uint64_t>& n_values,
                                                           const Scenario& tmpl, double gamma_th,
                                                           double grid_step = kDefaultGridStep,
                                                           bool parallel = false) {
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] == 0) throw std::invalid_argument("sweep_n: N values must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1]) throw std::invalid_argument("sweep_n: N values must ascend");
  }
  std::map<std::uint64_t, OptimizationResult> out;
  auto solve = [&tmpl, gamma_th, grid_step](std::uint64_t n) {
    Scenario s = tmpl;
    s.n_images = n;
    return find_optimal_threshold(s, gamma_th, grid_step);
  };
  if (!parallel) {
    for (std::uint64_t n : n_values) out.emplace(n, solve(n));
    return out;
  }
  std::vector<std::future<OptimizationResult>> jobs;
  jobs.reserve(n_values.size());
  for (std::uint64_t n : n_values) jobs.push_back(std::async(std::launch::async, solve, n));
  for (std::size_t i = 0; i < n_values.size(); ++i) out.emplace(n_values[i], jobs[i].get());
  return out;
}

}  // namespace tinyairnet
