#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tinyairnet {

using Rng = std::mt19937_64;

// Gaussian upper-tail probability Q(x) = P(X >= x), X ~ N(0,1).
inline double q_function(double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

// Device-side observation noise z = beta + w, w ~ N(0, sigma^2).
struct ObservationModel {
  double sigma_ml{0.125};

  bool operator==(const ObservationModel&) const = default;
};

// Distribution g_T of the true similarity beta on [0,1].
//
// Only Uniform(0,1) ships as a preset; custom() accepts any density/sampler
// pair supported on [0,1]. Two distributions compare equal when their names
// match.
class SimilarityDistribution {
 public:
  using Pdf = std::function<double(double)>;
  using Sampler = std::function<double(Rng&)>;

  static SimilarityDistribution uniform() {
    return SimilarityDistribution(
        "uniform", [](double b) { return (b >= 0.0 && b <= 1.0) ? 1.0 : 0.0; },
        [](Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); });
  }

  static SimilarityDistribution custom(std::string name, Pdf pdf, Sampler sampler) {
    if (!pdf || !sampler) throw std::invalid_argument("similarity distribution needs a pdf and a sampler");
    return SimilarityDistribution(std::move(name), std::move(pdf), std::move(sampler));
  }

  const std::string& name() const { return name_; }
  bool is_uniform() const { return name_ == "uniform"; }
  double pdf(double beta) const { return pdf_(beta); }
  double sample(Rng& rng) const { return sampler_(rng); }

  bool operator==(const SimilarityDistribution& o) const { return name_ == o.name_; }

 private:
  SimilarityDistribution(std::string name, Pdf pdf, Sampler sampler)
      : name_(std::move(name)), pdf_(std::move(pdf)), sampler_(std::move(sampler)) {}

  std::string name_;
  Pdf pdf_;
  Sampler sampler_;
};

// Draws one noisy observation of beta. sigma == 0 returns beta unchanged.
inline double observe(double beta, const ObservationModel& obs, Rng& rng) {
  if (obs.sigma_ml == 0.0) return beta;
  return beta + std::normal_distribution<double>(0.0, obs.sigma_ml)(rng);
}

namespace detail {

// Absolute error target for one full integral over [0,1].
inline constexpr double kQuadratureAbsTol = 1e-12;
inline constexpr unsigned kQuadratureDepth = 30;

// Bisection on the 15/31-point Gauss-Kronrod rule until the Kronrod error
// estimate falls below an absolute tolerance, split evenly across halves.
template <class F>
double adaptive_gk(const F& f, double a, double b, double abs_tol, unsigned depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  const double est = GK::integrate(f, a, b, 0, 0.0, &err);
  // The non-adaptive rule reports its error on the reference interval [-1,1].
  err *= 0.5 * (b - a);
  const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(est);
  if (err <= abs_tol || err <= roundoff || depth == 0) return est;
  const double mid = 0.5 * (a + b);
  return adaptive_gk(f, a, mid, 0.5 * abs_tol, depth - 1) + adaptive_gk(f, mid, b, 0.5 * abs_tol, depth - 1);
}

template <class F>
double integrate_segment(const F& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return adaptive_gk(f, a, b, kQuadratureAbsTol * (b - a), kQuadratureDepth);
}

// Integrates Q((v_th - beta)/sigma) * g_T(beta) over [a,b]. The Q factor
// switches from ~0 to ~1 within a few sigma of v_th, so the interval is split
// there to keep the adaptive rule well conditioned for tiny sigma.
inline double integrate_pass_probability(double v_th, double sigma, const SimilarityDistribution& dist,
                                         double a, double b) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma_ml must be > 0");
  std::vector<double> cuts{a, b};
  for (double c : {v_th - 8.0 * sigma, v_th, v_th + 8.0 * sigma}) {
    if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  auto integrand = [&](double beta) { return q_function((v_th - beta) / sigma) * dist.pdf(beta); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += integrate_segment(integrand, cuts[i], cuts[i + 1]);
  return sum;
}

}  // namespace detail

// P(z >= v_th) for one stored image.
inline double p_th(double v_th, double sigma_ml, const SimilarityDistribution& dist) {
  return std::clamp(detail::integrate_pass_probability(v_th, sigma_ml, dist, 0.0, 1.0), 0.0, 1.0);
}

// P(beta >= delta): probability that an image is truly relevant.
inline double p_delta(double delta, const SimilarityDistribution& dist) {
  if (delta >= 1.0) return 0.0;
  const double lo = std::max(delta, 0.0);
  auto f = [&](double beta) { return dist.pdf(beta); };
  return std::clamp(detail::integrate_segment(f, lo, 1.0), 0.0, 1.0);
}

// P(z >= v_th | beta >= delta). Throws std::domain_error when P_delta is 0.
inline double p_a(double v_th, double delta, double sigma_ml, const SimilarityDistribution& dist) {
  const double pd = p_delta(delta, dist);
  if (!(pd > 0.0)) throw std::domain_error("p_a undefined: P_delta is zero");
  const double joint = detail::integrate_pass_probability(v_th, sigma_ml, dist, std::max(delta, 0.0), 1.0);
  return std::clamp(joint / pd, 0.0, 1.0);
}

}  // namespace tinyairnet
