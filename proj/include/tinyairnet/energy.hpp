#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "tinyairnet/profiles.hpp"

namespace tinyairnet {

// Reference MUAC energy at full precision, in joules (3.7 pJ).
inline constexpr double kMuacReferenceJoules = 3.7e-12;

// Itemized energy of one retrieval round, in joules.
struct EnergyBreakdown {
  double e_dram{0.0};
  double e_c{0.0};
  double e_w{0.0};
  double e_a{0.0};
  double e_sim{0.0};
  double e_rx_model{0.0};
  double e_rx_query{0.0};
  double e_tx{0.0};

  double computation() const { return e_dram + e_c + e_w + e_a + e_sim; }
  double communication() const { return e_rx_model + e_rx_query + e_tx; }
  double total() const { return computation() + communication(); }

  bool operator==(const EnergyBreakdown&) const = default;
};

struct AccessEnergies {
  double local{0.0};  // E_L: register file / local SRAM access
  double main{0.0};   // E_M: main SRAM access
  double dram{0.0};   // E_D: one int-b_q DRAM access
};

struct HardwareEnergy {
  double compute{0.0};     // E_C
  double weights{0.0};     // E_W
  double activations{0.0}; // E_A

  double total() const { return compute + weights + activations; }
};

inline double precision_ratio(const MLModelProfile& m) { return m.b_q / m.b_max; }

inline double e_muac(const MLModelProfile& m) {
  return kMuacReferenceJoules * std::pow(precision_ratio(m), 1.25);
}

inline AccessEnergies access_energies(const MLModelProfile& m) {
  const double local = kMuacReferenceJoules * precision_ratio(m);
  return {local, 2.0 * local, 128.0 * local};
}

// Input-image fetch from DRAM; the model itself is assumed resident on chip.
inline double dram_energy(const MLModelProfile& m, const ImageSpec& im) {
  const double accesses = static_cast<double>(im.pixel_count()) * (static_cast<double>(im.b_in) / m.b_q);
  return access_energies(m).dram * accesses;
}

// Compute, weight access and activation access energy of one inference.
inline HardwareEnergy hw_energy(const MLModelProfile& m) {
  const AccessEnergies acc = access_energies(m);
  const double muac = e_muac(m);
  const double p = 64.0 * m.b_max / m.b_q;
  const double reuse = m.n_c / std::sqrt(p);
  return HardwareEnergy{
      .compute = muac * (m.n_c + 3.0 * m.a_s),
      .weights = acc.main * m.n_s + acc.local * reuse,
      .activations = 2.0 * acc.main * m.a_s + acc.local * reuse,
  };
}

// MUAC count of one similarity evaluation between two l_f-element vectors.
inline std::uint64_t n_f(std::uint64_t l_f) {
  if (l_f < 1) throw std::invalid_argument("n_f: l_f must be >= 1");
  return l_f * (l_f - 1) + 2 * l_f * l_f + 2;
}

inline double similarity_energy(const MLModelProfile& m) {
  return static_cast<double>(n_f(static_cast<std::uint64_t>(std::llround(m.l_f)))) * e_muac(m);
}

// Feature extraction plus similarity scoring for a single stored image.
inline double inference_energy_per_image(const MLModelProfile& m, const ImageSpec& im) {
  return dram_energy(m, im) + hw_energy(m).total() + similarity_energy(m);
}

// Downlink time of the model weights, topology and header.
inline double t_ml(const MLModelProfile& m, const RadioProfile& r) {
  return (m.n_s * m.b_q + r.b_ml + r.b_h_ml) / r.r_dl;
}

// Downlink time of the query feature. l_f is used directly as a bit count.
inline double t_q_f(const MLModelProfile& m, const RadioProfile& r) {
  return (m.l_f + r.b_h_f) / r.r_dl;
}

// Uplink time of one raw image.
inline double t_data(const ImageSpec& im, const RadioProfile& r) {
  return (static_cast<double>(im.b_in) * static_cast<double>(im.pixel_count()) + r.b_h) / r.r_ul;
}

// Full breakdown for a round in which `psi` images were uplinked.
inline EnergyBreakdown energy_breakdown(std::uint64_t psi, const Scenario& s) {
  const HardwareEnergy hw = hw_energy(s.model);
  const double n = static_cast<double>(s.n_images);
  return EnergyBreakdown{
      .e_dram = n * dram_energy(s.model, s.image),
      .e_c = n * hw.compute,
      .e_w = n * hw.weights,
      .e_a = n * hw.activations,
      .e_sim = n * similarity_energy(s.model),
      .e_rx_model = s.radio.xi_r * t_ml(s.model, s.radio),
      .e_rx_query = s.radio.xi_r * t_q_f(s.model, s.radio),
      .e_tx = s.radio.xi_t * t_data(s.image, s.radio) * static_cast<double>(psi),
  };
}

// Radio energy only: reception of model and query plus psi image uplinks.
inline double comm_energy(std::uint64_t psi, const Scenario& s) {
  return energy_breakdown(psi, s).communication();
}

// Transmit-everything scheme: every stored image is uplinked, no inference.
inline double baseline_energy(std::uint64_t n_images, const ImageSpec& im, const RadioProfile& r) {
  return static_cast<double>(n_images) * t_data(im, r) * r.xi_t;
}

}  // namespace tinyairnet
