#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "tinyairnet/energy.hpp"
#include "tinyairnet/stats.hpp"

namespace tinyairnet {

// One realization of the three-phase protocol.
struct TrialOutcome {
  std::vector<double> true_similarities;  // beta_j
  std::vector<double> observed;           // z_j
  std::uint64_t transmitted_count{0};     // |R|, z_j >= v_th
  std::uint64_t relevant_count{0};        // |T|, beta_j >= delta
  std::uint64_t delivered_relevant_count{0};  // |R ∩ T|
  bool success{false};                    // T == S
  EnergyBreakdown energy;
};

struct BatchResult {
  std::uint64_t n_trials{0};
  double mean_energy{0.0};
  double energy_stderr{0.0};
  double empirical_accuracy{0.0};
  double accuracy_stderr{0.0};
  double mean_tx_count{0.0};
  double tx_count_stderr{0.0};
  std::uint64_t master_seed{0};

  bool operator==(const BatchResult&) const = default;
};

// Generator for trial `index` of a batch. The state depends only on
// (master_seed, index), so trials can run in any order or on any thread.
inline Rng trial_rng(std::uint64_t master_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

// Draws N true similarities, observes them through the device model, uplinks
// those at or above v_th, and lets the server keep the truly relevant ones.
inline TrialOutcome run_trial(const Scenario& s, Rng& rng) {
  const ObservationModel obs = s.observation();
  TrialOutcome t;
  t.true_similarities.reserve(s.n_images);
  t.observed.reserve(s.n_images);
  for (std::uint64_t j = 0; j < s.n_images; ++j) {
    const double beta = s.similarity.sample(rng);
    const double z = observe(beta, obs, rng);
    t.true_similarities.push_back(beta);
    t.observed.push_back(z);
    const bool sent = z >= s.v_th;
    const bool relevant = beta >= s.delta;
    t.transmitted_count += sent;
    t.relevant_count += relevant;
    t.delivered_relevant_count += sent && relevant;
  }
  t.success = t.delivered_relevant_count == t.relevant_count;
  t.energy = energy_breakdown(t.transmitted_count, s);
  return t;
}

namespace detail {

struct TrialSummary {
  double energy{0.0};
  std::uint64_t tx{0};
  bool success{false};
};

inline void mean_and_stderr(const std::vector<double>& xs, double& mean, double& stderr_out) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / n;
  if (xs.size() < 2) {
    stderr_out = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  stderr_out = std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace detail

// Runs n_trials independent trials on up to `parallelism` threads (0 means
// hardware concurrency). Aggregation happens in trial-index order, so the
// result is bit-identical for any thread count.
inline BatchResult run_batch(const Scenario& s, std::uint64_t n_trials, std::uint64_t master_seed,
                             unsigned parallelism = 1) {
  if (n_trials < 1) throw std::invalid_argument("run_batch: n_trials must be >= 1");
  if (parallelism == 0) parallelism = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<std::uint64_t>(std::min<std::uint64_t>(parallelism, n_trials));

  std::vector<detail::TrialSummary> trials(n_trials);
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng = trial_rng(master_seed, i);
      const TrialOutcome t = run_trial(s, rng);
      trials[i] = {t.energy.total(), t.transmitted_count, t.success};
    }
  };
  if (workers == 1) {
    work(0, n_trials);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (n_trials + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(n_trials, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  std::vector<double> energy(n_trials), tx(n_trials);
  std::uint64_t successes = 0;
  for (std::uint64_t i = 0; i < n_trials; ++i) {
    energy[i] = trials[i].energy;
    tx[i] = static_cast<double>(trials[i].tx);
    successes += trials[i].success;
  }

  BatchResult r;
  r.n_trials = n_trials;
  r.master_seed = master_seed;
  detail::mean_and_stderr(energy, r.mean_energy, r.energy_stderr);
  detail::mean_and_stderr(tx, r.mean_tx_count, r.tx_count_stderr);
  const double n = static_cast<double>(n_trials);
  r.empirical_accuracy = static_cast<double>(successes) / n;
  r.accuracy_stderr = std::sqrt(r.empirical_accuracy * (1.0 - r.empirical_accuracy) / n);
  return r;
}

}  // namespace tinyairnet
