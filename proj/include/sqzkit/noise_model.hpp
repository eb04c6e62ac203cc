#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sqzkit/units.hpp"

namespace sqzkit::model {

enum class Quadrature { plus, minus };  // amplitude (+) / phase (-)

// Output variances of one quadrature pair, in shot-noise units.
struct QuadraturePair {
  double plus = 1.0;
  double minus = 1.0;
  double get(Quadrature q) const { return q == Quadrature::plus ? plus : minus; }
  double opposite(Quadrature q) const { return q == Quadrature::plus ? minus : plus; }
};

// Single squeezing cavity. All rates are angular frequencies (rad/s).
// `center` is the operating point the sideband detuning is measured from:
// 0 for carrier-resonant operation, half an FSR for the anti-resonant lock.
struct SqueezerParams {
  double chi = 0.0;
  double gamma = 0.0;
  double center = 0.0;
};

// Squeezing cavity coupled to an empty test cavity. The spectrum's feature
// sits at the normal-mode splitting frequency omega_s.
struct CoupledParams {
  double chi = 0.0;
  double gamma = 0.0;
  double omega_s = 0.0;
};

// Readout chain: total optical+detection efficiency and quadrature-angle offset.
struct DetectionParams {
  double eta = 1.0;
  double delta_phi = 0.0;  // radians, canonical range [-pi/2, pi/2]
};

// Coupling-mirror transmissivity and one-way optical lengths of both cavities.
struct CavityGeometry {
  double l_test = 0.0;  // m
  double l_sqz = 0.0;   // m
  double t_c = 0.0;     // power transmissivity, 1 - R_c
};

using NoiseModel = std::variant<SqueezerParams, CoupledParams>;

inline void validate(const SqueezerParams& p) {
  if (!(p.chi >= 0.0) || !std::isfinite(p.chi))
    throw std::domain_error("SqueezerParams: chi must be >= 0");
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
    throw std::domain_error("SqueezerParams: gamma must be > 0");
  if (!(p.chi < p.gamma))
    throw std::domain_error("SqueezerParams: chi >= gamma (at or above oscillation threshold)");
  if (!std::isfinite(p.center)) throw std::domain_error("SqueezerParams: center must be finite");
}

inline void validate(const CoupledParams& p) {
  if (!(p.chi >= 0.0) || !std::isfinite(p.chi))
    throw std::domain_error("CoupledParams: chi must be >= 0");
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
    throw std::domain_error("CoupledParams: gamma must be > 0");
  if (!(p.omega_s > 0.0) || !std::isfinite(p.omega_s))
    throw std::domain_error("CoupledParams: omega_s must be > 0");
  if (!(p.chi < p.gamma))
    throw std::domain_error("CoupledParams: chi >= gamma (at or above oscillation threshold)");
}

inline void validate(const DetectionParams& d) {
  if (!(d.eta >= 0.0 && d.eta <= 1.0))
    throw std::domain_error("DetectionParams: eta must be in [0, 1]");
  if (!std::isfinite(d.delta_phi))
    throw std::domain_error("DetectionParams: delta_phi must be finite");
}

inline void validate(const CavityGeometry& g) {
  if (!(g.l_test > 0.0)) throw std::domain_error("CavityGeometry: l_test must be > 0");
  if (!(g.l_sqz > 0.0)) throw std::domain_error("CavityGeometry: l_sqz must be > 0");
  if (!(g.t_c > 0.0 && g.t_c < 1.0))
    throw std::domain_error("CavityGeometry: t_c must be in (0, 1)");
}

// Pump-depletion-free evaluation close to threshold is numerically suspect;
// report layers warn above this ratio.
inline bool near_threshold(double chi, double gamma) { return chi / gamma > 0.999; }

// Single-squeezer output variances at sideband detuning (omega - center).
// Written as a ratio of the two Lorentzian denominators so that
// plus * minus == 1 holds to rounding.
inline QuadraturePair v_single(const SqueezerParams& p, double omega) {
  validate(p);
  const double delta = omega - p.center;
  const double a = (p.gamma + p.chi) * (p.gamma + p.chi) + delta * delta;
  const double b = (p.gamma - p.chi) * (p.gamma - p.chi) + delta * delta;
  return {a / b, b / a};
}

// Quadrature transfer function of the coupled system. The amplified (+)
// quadrature has the wide width gamma+chi in the numerator so that
// |T+|^2 = V_c+ and T+ * T- == 1.
inline std::complex<double> transfer_coupled(const CoupledParams& p, double omega,
                                             Quadrature q) {
  validate(p);
  if (!(omega >= 0.0)) throw std::domain_error("transfer_coupled: omega must be >= 0");
  const double wide = p.gamma + p.chi;
  const double narrow = p.gamma - p.chi;
  const double resonant = omega * omega - p.omega_s * p.omega_s;
  const std::complex<double> num{(q == Quadrature::plus ? wide : narrow) * omega, resonant};
  const std::complex<double> den{(q == Quadrature::plus ? narrow : wide) * omega, resonant};
  return num / den;
}

// Coupled-system output variances; V_c(0) == 1 exactly and the feature
// peaks/dips at omega_s where the form reduces to the single-squeezer
// on-resonance expression.
inline QuadraturePair v_coupled(const CoupledParams& p, double omega) {
  validate(p);
  const double w2 = omega * omega;
  const double r = w2 - p.omega_s * p.omega_s;
  const double a = (p.gamma + p.chi) * (p.gamma + p.chi) * w2 + r * r;
  const double b = (p.gamma - p.chi) * (p.gamma - p.chi) * w2 + r * r;
  return {a / b, b / a};
}

struct VariancesVisitor {
  double omega;
  QuadraturePair operator()(const SqueezerParams& p) const { return v_single(p, omega); }
  QuadraturePair operator()(const CoupledParams& p) const { return v_coupled(p, omega); }
};

inline QuadraturePair variances(const NoiseModel& m, double omega) {
  return std::visit(VariancesVisitor{omega}, m);
}

// Loss and phase-noise readout model: the detected variance of one readout
// quadrature with the opposite quadrature mixed in by the angle offset.
inline double v_detected(const QuadraturePair& v, const DetectionParams& det, Quadrature readout) {
  validate(det);
  const double c = std::cos(det.delta_phi);
  const double s = std::sin(det.delta_phi);
  const double mixed = v.get(readout) * c * c + v.opposite(readout) * s * s;
  // parenthesized so eta = 1 passes tiny variances through without absorption
  return mixed * det.eta + (1.0 - det.eta);
}

inline double v_detected(const NoiseModel& m, const DetectionParams& det, double omega,
                         Quadrature readout) {
  return v_detected(variances(m, omega), det, readout);
}

// Element-wise detected variance over an angular-frequency grid.
inline std::vector<double> detected_spectrum(const NoiseModel& m, const DetectionParams& det,
                                             std::span<const double> grid, Quadrature readout) {
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("detected_spectrum: grid must be strictly increasing");
  for (double w : grid)
    if (!std::isfinite(w)) throw std::invalid_argument("detected_spectrum: grid must be finite");
  std::vector<double> out;
  out.reserve(grid.size());
  for (double w : grid) out.push_back(v_detected(m, det, w, readout));
  return out;
}

struct Extremum {
  double omega = 0.0;     // rad/s
  double variance = 1.0;  // shot-noise units
};

namespace detail {

// Golden-section minimization of f on [lo, hi] to a relative x tolerance.
template <typename F>
double golden_min(F&& f, double lo, double hi, double rel_tol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  while (b - a > rel_tol * std::max(scale, 1.0)) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Locates the detected-spectrum extremum in [band_lo, band_hi]: the maximum
// for the plus readout, the minimum for the minus readout. Dense scan keeps
// the search global (the minus readout has two symmetric minima plus a
// phase-noise bump); golden-section refines around the best grid cell.
inline Extremum extreme_detected(const NoiseModel& m, const DetectionParams& det, double band_lo,
                                 double band_hi, Quadrature readout, std::size_t scan_points = 4001) {
  if (!(band_lo < band_hi) || !std::isfinite(band_lo) || !std::isfinite(band_hi))
    throw std::invalid_argument("extreme_detected: empty or invalid search band");
  const double sign = readout == Quadrature::plus ? -1.0 : 1.0;  // minimize sign*V
  auto objective = [&](double w) { return sign * v_detected(m, det, w, readout); };

  const double step = (band_hi - band_lo) / static_cast<double>(scan_points - 1);
  double best_w = band_lo;
  double best = objective(band_lo);
  for (std::size_t i = 1; i < scan_points; ++i) {
    const double w = band_lo + step * static_cast<double>(i);
    const double v = objective(w);
    if (v < best) {
      best = v;
      best_w = w;
    }
  }
  const double lo = std::max(band_lo, best_w - step);
  const double hi = std::min(band_hi, best_w + step);
  const double w_star = detail::golden_min(objective, lo, hi, 1e-9);
  return {w_star, v_detected(m, det, w_star, readout)};
}

// Normal-mode splitting frequency from the cavity geometry, in the
// small-coupling approximation T_c << 1 (held to ~0.2% even at T_c ~ 0.2).
inline double splitting_frequency(const CavityGeometry& g) {
  validate(g);
  return speed_of_light * std::sqrt(g.t_c / (4.0 * g.l_test * g.l_sqz));
}

// Oscillation threshold from the below-threshold operating point.
inline double threshold_power(double pump_power, double gamma, double chi) {
  if (!(chi > 0.0)) throw std::domain_error("threshold_power: chi must be > 0");
  const double ratio = gamma / chi;
  return pump_power * ratio * ratio;
}

}  // namespace sqzkit::model
