#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tinyairnet/stats.hpp"

namespace tinyairnet {

// Architecture statistics of the TinyML feature extractor. Counts are kept
// as reals since they are quoted in millions.
struct MLModelProfile {
  double n_s{0.0};  // weights + biases
  double n_c{0.0};  // MUAC operations per inference
  double a_s{0.0};  // activations across the network
  double l_f{0.0};  // feature-vector length (elements)
  double b_q{8.0};  // quantization bits per weight
  double b_max{16.0};  // full-precision bits

  // Observation-noise standard deviation implied by the quantization level.
  double sigma_ml() const { return 1.0 / b_q; }

  bool operator==(const MLModelProfile&) const = default;
};

// Link rates (bit/s), radio power states (W) and header sizes (bits).
struct RadioProfile {
  double r_dl{0.0};
  double r_ul{0.0};
  double xi_t{0.0};
  double xi_r{0.0};
  double b_h{0.0};     // image header
  double b_h_ml{0.0};  // model transfer header
  double b_h_f{0.0};   // query feature header
  double b_ml{0.0};    // model topology

  bool operator==(const RadioProfile&) const = default;
};

struct ImageSpec {
  std::uint32_t m_c{0};
  std::uint32_t m_h{0};
  std::uint32_t m_w{0};
  std::uint32_t b_in{0};

  std::uint64_t pixel_count() const {
    return std::uint64_t{m_c} * m_h * m_w;
  }

  // Raw payload size in bits, or nullopt when it does not fit in 64 bits.
  std::optional<std::uint64_t> raw_bits() const {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t bits = b_in;
    for (std::uint64_t f : {std::uint64_t{m_c}, std::uint64_t{m_h}, std::uint64_t{m_w}}) {
      if (f != 0 && bits > max / f) return std::nullopt;
      bits *= f;
    }
    return bits;
  }

  bool operator==(const ImageSpec&) const = default;
};

// One experiment point.
struct Scenario {
  MLModelProfile model;
  RadioProfile radio;
  ImageSpec image;
  std::uint64_t n_images{0};
  double delta{0.0};
  double v_th{0.0};
  double gamma_th{0.0};
  SimilarityDistribution similarity = SimilarityDistribution::uniform();
  // Replaces 1/b_q as the observation noise when set. Zero is accepted for
  // simulation only.
  std::optional<double> sigma_override;

  double sigma_ml() const {
    return sigma_override ? *sigma_override : model.sigma_ml();
  }

  ObservationModel observation() const { return ObservationModel{sigma_ml()}; }

  bool operator==(const Scenario&) const = default;
};

namespace presets {

// EtinyNet-1.0 backbone statistics.
inline MLModelProfile etinynet_1_0(double b_q = 8.0) {
  return MLModelProfile{
      .n_s = 0.976e6,
      .n_c = 117e6,
      .a_s = 4.309e6,
      .l_f = 1000.0,
      .b_q = b_q,
      .b_max = 16.0,
  };
}

// NB-IoT class radio with symmetric 100 kbit/s links and zero-size headers.
inline RadioProfile nbiot_default() {
  return RadioProfile{
      .r_dl = 1e5,
      .r_ul = 1e5,
      .xi_t = 0.170,
      .xi_r = 0.160,
  };
}

inline ImageSpec rgb_256() { return ImageSpec{3, 256, 256, 8}; }

inline Scenario default_scenario() {
  return Scenario{
      .model = etinynet_1_0(),
      .radio = nbiot_default(),
      .image = rgb_256(),
      .n_images = 10,
      .delta = 0.9,
      .v_th = 0.98046875,
      .gamma_th = 0.98,
      .similarity = SimilarityDistribution::uniform(),
      .sigma_override = std::nullopt,
  };
}

inline std::optional<MLModelProfile> model_by_name(const std::string& name) {
  if (name == "etinynet1.0") return etinynet_1_0();
  return std::nullopt;
}

inline std::optional<RadioProfile> radio_by_name(const std::string& name) {
  if (name == "nbiot") return nbiot_default();
  return std::nullopt;
}

}  // namespace presets

// Lists every violated invariant; an empty result means the scenario is valid.
inline std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> out;
  const auto& m = s.model;
  if (!(m.n_s > 0 && m.n_c > 0 && m.a_s > 0 && m.l_f > 0 && m.b_q > 0 && m.b_max > 0))
    out.emplace_back("model: all fields must be strictly positive");
  if (m.b_q > m.b_max) out.emplace_back("model: b_q <= b_max violated");
  if (m.b_q > 0 && m.b_q < 1) out.emplace_back("model: sigma_ml = 1/b_q must lie in (0,1]");

  const auto& r = s.radio;
  if (!(r.r_dl > 0 && r.r_ul > 0 && r.xi_t > 0 && r.xi_r > 0))
    out.emplace_back("radio: rates and powers must be strictly positive");
  if (!(r.b_h >= 0 && r.b_h_ml >= 0 && r.b_h_f >= 0 && r.b_ml >= 0))
    out.emplace_back("radio: header bit counts must be >= 0");

  const auto& im = s.image;
  if (im.m_c == 0 || im.m_h == 0 || im.m_w == 0 || im.b_in == 0)
    out.emplace_back("image: all fields must be strictly positive");
  else if (!im.raw_bits())
    out.emplace_back("image: raw bit count overflows");

  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(s.delta) || !in_unit(s.v_th) || !in_unit(s.gamma_th))
    out.emplace_back("scenario: thresholds delta, v_th, gamma_th must lie in [0,1]");
  if (s.sigma_override && !(*s.sigma_override >= 0.0))
    out.emplace_back("scenario: sigma_ml override must be >= 0");
  return out;
}

}  // namespace tinyairnet
