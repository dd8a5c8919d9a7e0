#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "tinyairnet/energy.hpp"
#include "tinyairnet/stats.hpp"

namespace tinyairnet {

// Expected-value model of one retrieval round.
struct AnalyticalResult {
  double p_th{0.0};
  double p_delta{0.0};
  double p_a{0.0};
  double expected_tx_count{0.0};
  double expected_false_positives{0.0};  // diagnostic: transmitted but irrelevant
  double e_comp{0.0};
  double e_comm{0.0};
  double e_total{0.0};
  double gamma{0.0};
  double e_baseline{0.0};
  double eta{std::numeric_limits<double>::quiet_NaN()};  // NaN when N = 0
};

namespace detail {

inline double log_binomial(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace detail

// Binomial pmf C(n,w) p^w (1-p)^(n-w), evaluated in log space.
inline double p_d(std::uint64_t w, std::uint64_t n, double p) {
  if (w > n) throw std::invalid_argument("p_d: w must not exceed n");
  if (p <= 0.0) return w == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return w == n ? 1.0 : 0.0;
  const double log_pmf = detail::log_binomial(n, w) + static_cast<double>(w) * std::log(p) +
                         static_cast<double>(n - w) * std::log1p(-p);
  return std::exp(log_pmf);
}

inline double p_th(const Scenario& s) { return p_th(s.v_th, s.sigma_ml(), s.similarity); }
inline double p_delta(const Scenario& s) { return p_delta(s.delta, s.similarity); }

// Expected radio energy: literal sum over the binomial number of uplinks plus
// the fixed reception cost.
inline double expected_comm_energy(const Scenario& s) {
  const double pth = p_th(s);
  const double per_image_tx = s.radio.xi_t * t_data(s.image, s.radio);
  double tx = 0.0;
  for (std::uint64_t w = 0; w <= s.n_images; ++w)
    tx += p_d(w, s.n_images, pth) * static_cast<double>(w) * per_image_tx;
  return tx + (t_ml(s.model, s.radio) + t_q_f(s.model, s.radio)) * s.radio.xi_r;
}

inline double expected_comp_energy(const Scenario& s) {
  return static_cast<double>(s.n_images) * inference_energy_per_image(s.model, s.image);
}

inline double expected_total_energy(const Scenario& s) {
  return expected_comp_energy(s) + expected_comm_energy(s);
}

// Probability that every truly relevant image reaches the server: sum over
// the binomial number of relevant images of P_A^zeta. With no relevant mass
// (P_delta = 0) the relevant set is always empty and the result is 1.
inline double retrieval_accuracy(const Scenario& s) {
  const double pd = p_delta(s);
  if (s.n_images == 0 || pd <= 0.0) return 1.0;
  const double pa = p_a(s.v_th, s.delta, s.sigma_ml(), s.similarity);
  double gamma = 0.0;
  for (std::uint64_t z = 0; z <= s.n_images; ++z)
    gamma += std::pow(pa, static_cast<double>(z)) * p_d(z, s.n_images, pd);
  return std::clamp(gamma, 0.0, 1.0);
}

inline double baseline_energy(const Scenario& s) { return baseline_energy(s.n_images, s.image, s.radio); }

// Ratio of the scheme's expected total energy at s.v_th to the baseline.
inline double energy_ratio(const Scenario& s) {
  const double base = baseline_energy(s);
  if (!(base > 0.0)) throw std::domain_error("energy_ratio: baseline energy is zero (N = 0)");
  return expected_total_energy(s) / base;
}

inline AnalyticalResult analyze(const Scenario& s) {
  AnalyticalResult r;
  r.p_th = p_th(s);
  r.p_delta = p_delta(s);
  r.p_a = r.p_delta > 0.0 ? p_a(s.v_th, s.delta, s.sigma_ml(), s.similarity) : 1.0;
  const double n = static_cast<double>(s.n_images);
  r.expected_tx_count = n * r.p_th;
  r.expected_false_positives = std::max(0.0, n * (r.p_th - r.p_delta * r.p_a));
  r.e_comp = expected_comp_energy(s);
  r.e_comm = expected_comm_energy(s);
  r.e_total = r.e_comp + r.e_comm;
  r.gamma = retrieval_accuracy(s);
  r.e_baseline = baseline_energy(s);
  if (r.e_baseline > 0.0) r.eta = r.e_total / r.e_baseline;
  return r;
}

}  // namespace tinyairnet
