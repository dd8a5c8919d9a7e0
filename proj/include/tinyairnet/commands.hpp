#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "tinyairnet/analytics.hpp"
#include "tinyairnet/config.hpp"
#include "tinyairnet/montecarlo.hpp"
#include "tinyairnet/optimize.hpp"

namespace tinyairnet {

// Environment variable naming the directory for output files when no
// explicit path is configured.
inline constexpr const char* kOutDirEnv = "TINYAIRNET_OUT_DIR";

// A CSV table plus the config that produced it. Rendering writes the config
// as a `#`-prefixed preamble so every file can be replayed.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string preamble;  // raw text, prefixed line by line on render
};

inline std::string format_real(double v) { return fmt::format("{:.15g}", v); }

inline std::string render_csv(const CsvTable& t) {
  std::string out;
  std::size_t pos = 0;
  while (pos < t.preamble.size()) {
    const auto nl = t.preamble.find('\n', pos);
    const auto end = nl == std::string::npos ? t.preamble.size() : nl;
    const std::string_view line(t.preamble.data() + pos, end - pos);
    out += line.empty() ? std::string("#\n") : fmt::format("# {}\n", line);
    pos = end + 1;
  }
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(t.header);
  for (const auto& r : t.rows) emit(r);
  return out;
}

// Thread count and output path are omitted so the file depends only on
// result-relevant settings.
inline std::string make_preamble(const ExperimentConfig& cfg) {
  return fmt::format("tinyairnet {} (master_seed = {})\n\n{}", to_string(cfg.mode), cfg.master_seed,
                     to_config_string(cfg, false));
}

// Energy/accuracy trade-off over the threshold grid: analytical values next
// to Monte Carlo estimates. Every grid point reuses the master seed.
inline CsvTable cmd_figure2(const ExperimentConfig& cfg) {
  require_valid(cfg);
  std::vector<double> grid = cfg.v_th_grid;
  std::sort(grid.begin(), grid.end());

  CsvTable t;
  t.preamble = make_preamble(cfg);
  t.header = {"v_th", "e_total_theory", "gamma_theory", "e_total_sim", "gamma_sim", "e_total_stderr",
              "gamma_stderr"};
  Scenario s = cfg.scenario;
  for (double v : grid) {
    s.v_th = v;
    const double e = expected_total_energy(s);
    const double g = retrieval_accuracy(s);
    const BatchResult b = run_batch(s, cfg.n_trials, cfg.master_seed, cfg.threads);
    t.rows.push_back({format_real(v), format_real(e), format_real(g), format_real(b.mean_energy),
                      format_real(b.empirical_accuracy), format_real(b.energy_stderr),
                      format_real(b.accuracy_stderr)});
  }
  return t;
}

// Accuracy-constrained optimum and energy ratio against N for every
// (delta, b_q) combination.
inline CsvTable cmd_figure3(const ExperimentConfig& cfg) {
  require_valid(cfg);
  std::vector<double> deltas = cfg.delta_list;
  std::vector<double> bqs = cfg.b_q_list;
  std::sort(deltas.begin(), deltas.end());
  std::sort(bqs.begin(), bqs.end());

  CsvTable t;
  t.preamble = make_preamble(cfg);
  t.header = {"n_images", "delta", "b_q", "v_th_opt", "eta", "e_total", "gamma", "e_baseline"};
  for (double d : deltas) {
    for (double bq : bqs) {
      Scenario tmpl = cfg.scenario;
      tmpl.delta = d;
      tmpl.model.b_q = bq;
      const auto results = sweep_n(cfg.n_list, tmpl, cfg.scenario.gamma_th, cfg.grid_step, cfg.threads > 1);
      for (const auto& [n, r] : results) {
        if (r.feasible()) {
          t.rows.push_back({fmt::format("{}", n), format_real(d), format_real(bq), format_real(*r.v_th_opt),
                            format_real(r.eta), format_real(r.e_total_at_opt), format_real(r.gamma_at_opt),
                            format_real(r.e_baseline)});
        } else {
          t.rows.push_back({fmt::format("{}", n), format_real(d), format_real(bq), "infeasible", "", "", "",
                            format_real(r.e_baseline)});
        }
      }
    }
  }
  return t;
}

namespace detail {

inline CsvTable key_value_table(const ExperimentConfig& cfg) {
  CsvTable t;
  t.preamble = make_preamble(cfg);
  t.header = {"quantity", "value"};
  return t;
}

inline void add(CsvTable& t, std::string key, double v) { t.rows.push_back({std::move(key), format_real(v)}); }

inline void add_breakdown(CsvTable& t, const std::string& prefix, const EnergyBreakdown& e) {
  add(t, prefix + "e_dram", e.e_dram);
  add(t, prefix + "e_c", e.e_c);
  add(t, prefix + "e_w", e.e_w);
  add(t, prefix + "e_a", e.e_a);
  add(t, prefix + "e_sim", e.e_sim);
  add(t, prefix + "e_rx_model", e.e_rx_model);
  add(t, prefix + "e_rx_query", e.e_rx_query);
  add(t, prefix + "e_tx", e.e_tx);
  add(t, prefix + "e_total", e.total());
}

}  // namespace detail

// Analytical report for the configured scenario. The itemized breakdown uses
// the expected number of uplinks for the transmit term.
inline CsvTable cmd_analyze(const ExperimentConfig& cfg) {
  require_valid(cfg);
  const Scenario& s = cfg.scenario;
  const AnalyticalResult r = analyze(s);
  CsvTable t = detail::key_value_table(cfg);

  EnergyBreakdown e = energy_breakdown(0, s);
  e.e_tx = s.radio.xi_t * t_data(s.image, s.radio) * r.expected_tx_count;
  detail::add_breakdown(t, "", e);
  detail::add(t, "t_ml", t_ml(s.model, s.radio));
  detail::add(t, "t_q_f", t_q_f(s.model, s.radio));
  detail::add(t, "t_data", t_data(s.image, s.radio));
  detail::add(t, "sigma_ml", s.sigma_ml());
  detail::add(t, "p_th", r.p_th);
  detail::add(t, "p_delta", r.p_delta);
  detail::add(t, "p_a", r.p_a);
  detail::add(t, "expected_tx_count", r.expected_tx_count);
  detail::add(t, "expected_false_positives", r.expected_false_positives);
  detail::add(t, "e_comp", r.e_comp);
  detail::add(t, "e_comm", r.e_comm);
  detail::add(t, "e_total_expected", r.e_total);
  detail::add(t, "gamma", r.gamma);
  detail::add(t, "e_baseline", r.e_baseline);
  detail::add(t, "eta", r.eta);
  return t;
}

// Monte Carlo report. A single-trial run also echoes the realized trial.
inline CsvTable cmd_simulate(const ExperimentConfig& cfg) {
  require_valid(cfg);
  if (cfg.n_trials < 1) throw ConfigError("run.trials: must be >= 1 for simulation modes");
  const BatchResult b = run_batch(cfg.scenario, cfg.n_trials, cfg.master_seed, cfg.threads);
  CsvTable t = detail::key_value_table(cfg);
  t.rows.push_back({"n_trials", fmt::format("{}", b.n_trials)});
  t.rows.push_back({"master_seed", fmt::format("{}", b.master_seed)});
  detail::add(t, "mean_energy", b.mean_energy);
  detail::add(t, "energy_stderr", b.energy_stderr);
  detail::add(t, "empirical_accuracy", b.empirical_accuracy);
  detail::add(t, "accuracy_stderr", b.accuracy_stderr);
  detail::add(t, "mean_tx_count", b.mean_tx_count);
  detail::add(t, "tx_count_stderr", b.tx_count_stderr);

  if (cfg.n_trials == 1) {
    Rng rng = trial_rng(cfg.master_seed, 0);
    const TrialOutcome o = run_trial(cfg.scenario, rng);
    t.rows.push_back({"trial.transmitted_count", fmt::format("{}", o.transmitted_count)});
    t.rows.push_back({"trial.relevant_count", fmt::format("{}", o.relevant_count)});
    t.rows.push_back({"trial.delivered_relevant_count", fmt::format("{}", o.delivered_relevant_count)});
    t.rows.push_back({"trial.success", o.success ? "1" : "0"});
    for (std::size_t j = 0; j < o.true_similarities.size(); ++j) {
      detail::add(t, fmt::format("trial.beta[{}]", j), o.true_similarities[j]);
      detail::add(t, fmt::format("trial.z[{}]", j), o.observed[j]);
    }
    detail::add_breakdown(t, "trial.", o.energy);
  }
  return t;
}

// Optimizer report. Infeasibility is reported as a row, not an error.
inline CsvTable cmd_optimize(const ExperimentConfig& cfg) {
  require_valid(cfg);
  const OptimizationResult r = find_optimal_threshold(cfg.scenario, cfg.scenario.gamma_th, cfg.grid_step);
  CsvTable t = detail::key_value_table(cfg);
  t.rows.push_back({"feasible", r.feasible() ? "1" : "0"});
  t.rows.push_back({"feasible_count", fmt::format("{}", r.feasible_count)});
  detail::add(t, "grid_step", r.grid_step);
  detail::add(t, "e_baseline", r.e_baseline);
  if (r.feasible()) {
    detail::add(t, "v_th_opt", *r.v_th_opt);
    detail::add(t, "e_total_at_opt", r.e_total_at_opt);
    detail::add(t, "gamma_at_opt", r.gamma_at_opt);
    detail::add(t, "eta", r.eta);
  }
  return t;
}

inline CsvTable run_mode(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case Mode::analyze: return cmd_analyze(cfg);
    case Mode::simulate: return cmd_simulate(cfg);
    case Mode::optimize: return cmd_optimize(cfg);
    case Mode::figure2: return cmd_figure2(cfg);
    case Mode::figure3: return cmd_figure3(cfg);
  }
  throw std::logic_error("unhandled mode");
}

// Explicit path wins; otherwise <$TINYAIRNET_OUT_DIR>/<mode>.csv; otherwise
// nullopt (stdout).
inline std::optional<std::filesystem::path> resolve_output_path(const ExperimentConfig& cfg,
                                                                const char* env_dir) {
  if (!cfg.out_path.empty()) return std::filesystem::path(cfg.out_path);
  if (env_dir && *env_dir) return std::filesystem::path(env_dir) / fmt::format("{}.csv", to_string(cfg.mode));
  return std::nullopt;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot open output file '{}'", path.string()));
  f << content;
  if (!f) throw std::runtime_error(fmt::format("failed writing output file '{}'", path.string()));
}

}  // namespace tinyairnet
