#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqzkit/noise_model.hpp"
#include "sqzkit/spectra.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit::synth {

enum class PhaseModel {
  free_running_uniform,  // detection angle uniform on [0, pi)
  gaussian_jitter,       // gaussian offset about the nominal quadrature
};

// Forward model of one measurement campaign. The detection angle is measured
// from the squeezed quadrature: 0 reads squeezing, pi/2 reads anti-squeezing.
// For gaussian jitter the scale is base_det.delta_phi and the nominal
// quadrature alternates per spectrum so both traces stay populated.
struct CampaignConfig {
  model::NoiseModel noise_model = model::SqueezerParams{};
  model::DetectionParams base_det;  // eta fixed; delta_phi is the jitter scale
  std::vector<double> grid_hz;
  int n_spectra = 1;
  // Spectrum-analyzer averaging; per-bin relative estimator noise is
  // 1/sqrt(averages_per_bin). 0 means infinite averaging (noiseless).
  int averages_per_bin = 100;
  std::uint64_t seed = 0;
  PhaseModel phase_model = PhaseModel::free_running_uniform;
  std::optional<double> dark_offset_db;  // dark level in dB below shot; none = no dark
  bool noisy_shot = false;               // estimator noise on the shot reference too
};

inline void validate(const CampaignConfig& cfg) {
  std::visit([](const auto& p) { model::validate(p); }, cfg.noise_model);
  model::validate(cfg.base_det);
  if (cfg.n_spectra < 1) throw std::invalid_argument("campaign: n_spectra must be >= 1");
  if (cfg.averages_per_bin < 0)
    throw std::invalid_argument("campaign: averages_per_bin must be >= 0");
  if (cfg.grid_hz.size() < 2) throw std::invalid_argument("campaign: grid needs >= 2 points");
  for (std::size_t i = 0; i + 1 < cfg.grid_hz.size(); ++i)
    if (!(cfg.grid_hz[i] < cfg.grid_hz[i + 1]))
      throw std::invalid_argument("campaign: grid must be strictly increasing");
  if (cfg.dark_offset_db && !(*cfg.dark_offset_db > 0.0))
    throw std::invalid_argument("campaign: dark offset must be > 0 dB below shot");
}

namespace detail {

// splitmix64; decorrelates per-spectrum engines from (seed, index) so
// generation order cannot matter.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

inline double nominal_quadrature(int index) {
  return index % 2 == 0 ? 0.0 : std::numbers::pi / 2.0;
}

// Draws one detection angle. Constant within a spectrum; redrawn per spectrum.
template <typename Rng>
double sample_phase(PhaseModel phase_model, double jitter_sigma, double nominal, Rng& rng) {
  if (phase_model == PhaseModel::free_running_uniform) {
    std::uniform_real_distribution<double> dist(0.0, std::numbers::pi);
    return dist(rng);
  }
  if (jitter_sigma == 0.0) return nominal;
  std::normal_distribution<double> dist(0.0, jitter_sigma);
  return nominal + dist(rng);
}

struct PhaseSample {
  int index = 0;
  double nominal = 0.0;  // radians; quadrature the draw jitters about
  double phase = 0.0;    // radians; angle actually applied
};

struct Campaign {
  std::vector<spectra::SpectrumRecord> ensemble;
  spectra::SpectrumRecord dark;
  spectra::SpectrumRecord shot;
  std::vector<PhaseSample> truth;
};

// Generates the synthetic ensemble plus dark/shot references and the phase
// truth sidecar. Deterministic for a given config; per-spectrum engines are
// derived from (seed, index).
inline Campaign generate_campaign(const CampaignConfig& cfg) {
  validate(cfg);
  const std::size_t n_bins = cfg.grid_hz.size();
  const double dark_level = cfg.dark_offset_db ? linear_from_db(-*cfg.dark_offset_db) : 0.0;
  const double noise_sigma =
      cfg.averages_per_bin > 0 ? 1.0 / std::sqrt(static_cast<double>(cfg.averages_per_bin)) : 0.0;

  std::vector<double> grid_omega(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) grid_omega[i] = omega_from_hz(cfg.grid_hz[i]);

  Campaign out;
  out.ensemble.reserve(static_cast<std::size_t>(cfg.n_spectra));
  out.truth.reserve(static_cast<std::size_t>(cfg.n_spectra));

  for (int k = 0; k < cfg.n_spectra; ++k) {
    std::mt19937_64 rng(detail::mix(cfg.seed, static_cast<std::uint64_t>(k)));
    const double nominal = nominal_quadrature(k);
    const double theta = sample_phase(cfg.phase_model, cfg.base_det.delta_phi, nominal, rng);
    out.truth.push_back({k, nominal, theta});

    const model::DetectionParams det{cfg.base_det.eta, theta};
    spectra::SpectrumRecord rec;
    rec.frequencies_hz = cfg.grid_hz;
    rec.power.resize(n_bins);
    rec.meta.label = "signal_" + std::to_string(k);
    rec.meta.acq_index = k;
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < n_bins; ++i) {
      const double v =
          model::v_detected(cfg.noise_model, det, grid_omega[i], model::Quadrature::minus);
      double p = v + dark_level;  // unit shot level
      if (noise_sigma > 0.0) p *= std::max(1.0 + noise_sigma * noise(rng), 1e-6);
      rec.power[i] = p;
    }
    out.ensemble.push_back(std::move(rec));
  }

  out.dark.frequencies_hz = cfg.grid_hz;
  out.dark.power.assign(n_bins, dark_level);
  out.dark.meta.label = "dark";
  out.dark.meta.acq_index = -1;

  out.shot.frequencies_hz = cfg.grid_hz;
  out.shot.power.assign(n_bins, 1.0 + dark_level);
  out.shot.meta.label = "shot";
  out.shot.meta.acq_index = -2;
  if (cfg.noisy_shot && noise_sigma > 0.0) {
    std::mt19937_64 rng(detail::mix(cfg.seed, static_cast<std::uint64_t>(cfg.n_spectra)));
    std::normal_distribution<double> noise(0.0, 1.0);
    for (double& p : out.shot.power) p *= std::max(1.0 + noise_sigma * noise(rng), 1e-6);
  }
  return out;
}

}  // namespace sqzkit::synth
