#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sqzkit/errors.hpp"
#include "sqzkit/least_squares.hpp"
#include "sqzkit/noise_model.hpp"
#include "sqzkit/spectra.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit::fit {

enum class ModelKind { single, coupled };
enum class TraceUse { both, upper_only, lower_only };
enum class Weighting { log_db, linear };

// Canonical parameter order shared by results, pins, bounds and reports.
enum Param : std::size_t { p_chi = 0, p_gamma, p_feature, p_eta, p_delta_phi };
inline constexpr std::size_t n_params = 5;

inline const char* param_name(ModelKind kind, std::size_t i) {
  static constexpr std::array<const char*, n_params> single{"chi", "gamma", "center", "eta",
                                                            "delta_phi"};
  static constexpr std::array<const char*, n_params> coupled{"chi", "gamma", "omega_s", "eta",
                                                             "delta_phi"};
  return kind == ModelKind::single ? single[i] : coupled[i];
}

struct FitProblem {
  spectra::TracePair traces;
  ModelKind kind = ModelKind::single;
  TraceUse use = TraceUse::both;
  Weighting weighting = Weighting::log_db;
  std::array<std::optional<double>, n_params> pinned{};  // rad/s for rates, rad for delta_phi
  std::array<std::optional<std::pair<double, double>>, n_params> bounds{};
  std::optional<std::array<double, n_params>> init;
};

struct FitResult {
  ModelKind kind = ModelKind::single;
  std::array<double, n_params> params{};  // chi, gamma, feature (rad/s), eta, delta_phi
  std::array<double, n_params> sigma{};   // standard errors; 0 for pinned parameters
  std::array<bool, n_params> pinned{};
  double residual_rms_db = 0.0;
  double ssr = 0.0;
  int iterations = 0;
  bool converged = false;
  double condition = 0.0;
  bool near_threshold = false;
  std::string message;
};

// Detected model value for one readout quadrature at angular frequency omega.
inline double model_value(ModelKind kind, const std::array<double, n_params>& x, double omega,
                          model::Quadrature readout) {
  const model::DetectionParams det{x[p_eta], x[p_delta_phi]};
  const model::QuadraturePair v =
      kind == ModelKind::single
          ? model::v_single({x[p_chi], x[p_gamma], x[p_feature]}, omega)
          : model::v_coupled({x[p_chi], x[p_gamma], x[p_feature]}, omega);
  return model::v_detected(v, det, readout);
}

namespace detail {

// Distance in Hz from the anchor bin to where `y` crosses `level`, walking in
// one direction with linear interpolation. NaN when the curve never crosses.
inline double crossing_distance(const std::vector<double>& f_hz, const std::vector<double>& y,
                                std::size_t anchor, double level, int dir, bool downward) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(anchor);
  while (true) {
    const std::ptrdiff_t j = i + dir;
    if (j < 0 || j >= n) return std::numeric_limits<double>::quiet_NaN();
    const bool crossed = downward ? y[j] <= level : y[j] >= level;
    if (crossed) {
      const double t = (level - y[i]) / (y[j] - y[i]);
      const double f = f_hz[static_cast<std::size_t>(i)] +
                       t * (f_hz[static_cast<std::size_t>(j)] - f_hz[static_cast<std::size_t>(i)]);
      return std::abs(f - f_hz[anchor]);
    }
    i = j;
  }
}

inline double mean_valid(double a, double b, double fallback) {
  const bool va = std::isfinite(a) && a > 0.0;
  const bool vb = std::isfinite(b) && b > 0.0;
  if (va && vb) return 0.5 * (a + b);
  if (va) return a;
  if (vb) return b;
  return fallback;
}

}  // namespace detail

// Feature-based starting point: feature from the upper-trace arg-max, the
// two natural widths gamma-chi / gamma+chi from half-maximum crossings, eta
// from the peak height against the width-implied pure variance, delta_phi
// from the phase-noise bump the lower trace shows at the feature.
inline std::array<double, n_params> initial_guess(const spectra::TracePair& traces,
                                                  ModelKind kind) {
  spectra::validate(traces);
  const auto& f = traces.frequencies_hz;
  const std::size_t k = static_cast<std::size_t>(
      std::max_element(traces.upper.begin(), traces.upper.end()) - traces.upper.begin());
  const double peak = traces.upper[k];
  if (db_from_linear(std::max(peak, 1e-300)) < 1.0)
    throw NoFeatureError("initial_guess: no feature above 1 dB in the upper trace");

  const std::size_t j = static_cast<std::size_t>(
      std::min_element(traces.lower.begin(), traces.lower.end()) - traces.lower.begin());
  const double dip = traces.lower[j];

  const double span_hz = f.back() - f.front();
  // coupled-system features are half as wide in sideband offset
  const double width_factor = kind == ModelKind::coupled ? 2.0 : 1.0;

  const double up_level = 1.0 + 0.5 * (peak - 1.0);
  const double hw_up =
      detail::mean_valid(detail::crossing_distance(f, traces.upper, k, up_level, +1, true),
                         detail::crossing_distance(f, traces.upper, k, up_level, -1, true),
                         0.05 * span_hz);
  const double low_level = 1.0 - 0.5 * (1.0 - dip);
  const double hw_low =
      detail::mean_valid(detail::crossing_distance(f, traces.lower, j, low_level, +1, false),
                         detail::crossing_distance(f, traces.lower, j, low_level, -1, false),
                         0.25 * span_hz);

  double w_minus = width_factor * omega_from_hz(hw_up);
  double w_plus = width_factor * omega_from_hz(hw_low);
  if (!(w_plus > w_minus)) w_plus = 2.0 * w_minus;

  const double ratio = w_plus / w_minus;
  const double v_plus_feat = ratio * ratio;
  const double v_minus_feat = 1.0 / v_plus_feat;

  double eta = (peak - 1.0) / (v_plus_feat - 1.0);
  eta = std::clamp(eta, 0.02, 1.0);

  // bump height of the lower trace at the feature
  const double bracket = (traces.lower[k] - (1.0 - eta)) / eta;
  double sin2 = (bracket - v_minus_feat) / (v_plus_feat - v_minus_feat);
  sin2 = std::clamp(sin2, 1e-6, 0.16);
  const double delta_phi = std::asin(std::sqrt(sin2));

  std::array<double, n_params> out{};
  out[p_chi] = std::max(0.5 * (w_plus - w_minus), 1e-6 * w_plus);
  out[p_gamma] = 0.5 * (w_plus + w_minus);
  out[p_feature] = omega_from_hz(f[k]);
  out[p_eta] = eta;
  out[p_delta_phi] = delta_phi;
  return out;
}

namespace detail {

// Internal optimization coordinates. When chi and gamma are both free the
// solver works on the natural widths (gamma+chi, gamma-chi), which keeps
// chi < gamma a simple box constraint; otherwise free parameters map one
// to one. Rates are scaled to O(1).
struct Slot {
  enum Kind { w_plus, w_minus, external } kind = external;
  std::size_t ext_index = 0;
  double scale = 1.0;
};

struct Mapping {
  std::vector<Slot> slots;
  std::array<double, n_params> base{};  // pinned values; free entries overwritten
  bool w_mode = false;

  std::array<double, n_params> to_external(const lsq::Vec& v) const {
    std::array<double, n_params> x = base;
    double wp = 0.0, wm = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const double val = v[i] * slots[i].scale;
      switch (slots[i].kind) {
        case Slot::w_plus: wp = val; break;
        case Slot::w_minus: wm = val; break;
        case Slot::external: x[slots[i].ext_index] = val; break;
      }
    }
    if (w_mode) {
      x[p_chi] = std::max(0.5 * (wp - wm), 0.0);
      x[p_gamma] = 0.5 * (wp + wm);
    }
    return x;
  }

  lsq::Vec from_external(const std::array<double, n_params>& x) const {
    lsq::Vec v(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      switch (slots[i].kind) {
        case Slot::w_plus: v[i] = (x[p_gamma] + x[p_chi]) / slots[i].scale; break;
        case Slot::w_minus: v[i] = (x[p_gamma] - x[p_chi]) / slots[i].scale; break;
        case Slot::external: v[i] = x[slots[i].ext_index] / slots[i].scale; break;
      }
    }
    return v;
  }

  // Constant Jacobian d(external)/d(internal), column per slot.
  std::array<double, n_params> column(std::size_t i) const {
    std::array<double, n_params> col{};
    switch (slots[i].kind) {
      case Slot::w_plus:
        col[p_chi] = 0.5 * slots[i].scale;
        col[p_gamma] = 0.5 * slots[i].scale;
        break;
      case Slot::w_minus:
        col[p_chi] = -0.5 * slots[i].scale;
        col[p_gamma] = 0.5 * slots[i].scale;
        break;
      case Slot::external:
        col[slots[i].ext_index] = slots[i].scale;
        break;
    }
    return col;
  }
};

}  // namespace detail

// Joint damped-least-squares fit of the detection model to a TracePair.
// Both traces share one parameter vector; residuals are taken in dB by
// default so the anti-squeezing peak cannot drown out the squeezing dip.
inline FitResult solve(const FitProblem& problem) {
  spectra::validate(problem.traces);
  const auto& traces = problem.traces;
  const std::size_t n_bins = traces.frequencies_hz.size();

  std::vector<double> grid_omega(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i)
    grid_omega[i] = omega_from_hz(traces.frequencies_hz[i]);
  const double omega_lo = grid_omega.front();
  const double omega_hi = grid_omega.back();
  const double span = omega_hi - omega_lo;

  // external starting point
  std::array<double, n_params> start =
      problem.init ? *problem.init : initial_guess(traces, problem.kind);
  for (std::size_t i = 0; i < n_params; ++i)
    if (problem.pinned[i]) start[i] = *problem.pinned[i];

  // default external bounds, then user overrides
  std::array<std::pair<double, double>, n_params> ext_bounds;
  const double w_floor = 1e-4 * span;
  const double w_cap = 10.0 * span;
  ext_bounds[p_chi] = {0.0, w_cap};
  ext_bounds[p_gamma] = {w_floor, w_cap};
  ext_bounds[p_feature] = {omega_lo, omega_hi};
  ext_bounds[p_eta] = {1e-6, 1.0};
  ext_bounds[p_delta_phi] = {0.0, 1.2};
  for (std::size_t i = 0; i < n_params; ++i)
    if (problem.bounds[i]) {
      if (!(problem.bounds[i]->first < problem.bounds[i]->second))
        throw std::invalid_argument(std::string("fit: bounds for ") +
                                    param_name(problem.kind, i) + " must satisfy lo < hi");
      ext_bounds[i] = *problem.bounds[i];
    }

  // feasibility of pinned values
  for (std::size_t i = 0; i < n_params; ++i) {
    if (!problem.pinned[i]) continue;
    const double v = *problem.pinned[i];
    if (v < ext_bounds[i].first - 1e-12 || v > ext_bounds[i].second + 1e-12)
      throw std::invalid_argument(std::string("fit: pinned ") + param_name(problem.kind, i) +
                                  " outside bounds");
  }
  if (problem.pinned[p_chi] && problem.pinned[p_gamma] &&
      !(*problem.pinned[p_chi] < *problem.pinned[p_gamma]))
    throw std::invalid_argument("fit: pinned chi must stay below pinned gamma");

  // build the internal coordinate mapping
  detail::Mapping map;
  map.base = start;
  const double rate_scale = two_pi * 1e6;
  map.w_mode = !problem.pinned[p_chi] && !problem.pinned[p_gamma];
  lsq::Options opt;
  auto push_slot = [&](detail::Slot s, double lo, double hi) {
    map.slots.push_back(s);
    opt.lower.push_back(lo / s.scale);
    opt.upper.push_back(hi / s.scale);
  };
  if (map.w_mode) {
    const double wp_lo = std::max(w_floor, ext_bounds[p_gamma].first + ext_bounds[p_chi].first);
    const double wp_hi = ext_bounds[p_gamma].second + ext_bounds[p_chi].second;
    const double wm_lo = std::max(w_floor, ext_bounds[p_gamma].first - ext_bounds[p_chi].second);
    const double wm_hi = ext_bounds[p_gamma].second - ext_bounds[p_chi].first;
    push_slot({detail::Slot::w_plus, 0, rate_scale}, wp_lo, wp_hi);
    push_slot({detail::Slot::w_minus, 0, rate_scale}, std::max(wm_lo, w_floor), wm_hi);
  } else {
    if (!problem.pinned[p_chi]) {
      double hi = ext_bounds[p_chi].second;
      if (problem.pinned[p_gamma]) hi = std::min(hi, 0.999999 * *problem.pinned[p_gamma]);
      push_slot({detail::Slot::external, p_chi, rate_scale}, ext_bounds[p_chi].first, hi);
    }
    if (!problem.pinned[p_gamma]) {
      double lo = ext_bounds[p_gamma].first;
      if (problem.pinned[p_chi]) lo = std::max(lo, *problem.pinned[p_chi] * 1.000001 + w_floor);
      push_slot({detail::Slot::external, p_gamma, rate_scale}, lo, ext_bounds[p_gamma].second);
    }
  }
  if (!problem.pinned[p_feature])
    push_slot({detail::Slot::external, p_feature, rate_scale}, ext_bounds[p_feature].first,
              ext_bounds[p_feature].second);
  if (!problem.pinned[p_eta])
    push_slot({detail::Slot::external, p_eta, 1.0}, ext_bounds[p_eta].first,
              ext_bounds[p_eta].second);
  if (!problem.pinned[p_delta_phi])
    push_slot({detail::Slot::external, p_delta_phi, 1.0}, ext_bounds[p_delta_phi].first,
              ext_bounds[p_delta_phi].second);

  const bool use_upper = problem.use != TraceUse::lower_only;
  const bool use_lower = problem.use != TraceUse::upper_only;
  const bool log_domain = problem.weighting == Weighting::log_db;

  auto residuals = [&](const lsq::Vec& v) {
    std::array<double, n_params> x = map.to_external(v);
    // keep the evaluation inside the model's domain for FD probes
    x[p_gamma] = std::max(x[p_gamma], 0.5 * w_floor);
    x[p_chi] = std::clamp(x[p_chi], 0.0, 0.9999999 * x[p_gamma]);
    lsq::Vec r;
    r.reserve((use_upper ? n_bins : 0) + (use_lower ? n_bins : 0));
    auto emit = [&](model::Quadrature q, const std::vector<double>& data) {
      for (std::size_t i = 0; i < n_bins; ++i) {
        const double m = model_value(problem.kind, x, grid_omega[i], q);
        if (log_domain)
          r.push_back(10.0 * (std::log10(std::max(m, 1e-300)) - std::log10(data[i])));
        else
          r.push_back(m - data[i]);
      }
    };
    if (use_upper) emit(model::Quadrature::plus, traces.upper);
    if (use_lower) emit(model::Quadrature::minus, traces.lower);
    return r;
  };

  if (map.slots.empty()) throw std::invalid_argument("fit: all parameters pinned");

  const lsq::Result lres = lsq::solve(residuals, map.from_external(start), opt);

  FitResult out;
  out.kind = problem.kind;
  out.params = map.to_external(lres.params);
  out.params[p_chi] = std::clamp(out.params[p_chi], 0.0, 0.9999999 * out.params[p_gamma]);
  for (std::size_t i = 0; i < n_params; ++i) out.pinned[i] = problem.pinned[i].has_value();

  // propagate covariance through the constant internal->external map
  for (std::size_t e = 0; e < n_params; ++e) {
    double var = 0.0;
    for (std::size_t a = 0; a < map.slots.size(); ++a) {
      const double ma = map.column(a)[e];
      if (ma == 0.0) continue;
      for (std::size_t b = 0; b < map.slots.size(); ++b) {
        const double mb = map.column(b)[e];
        if (mb != 0.0) var += ma * lres.covariance[a][b] * mb;
      }
    }
    out.sigma[e] = std::sqrt(std::max(var, 0.0));
  }

  // residual rms in dB regardless of the fit weighting
  double ssr_db = 0.0;
  std::size_t n_used = 0;
  auto accumulate_db = [&](model::Quadrature q, const std::vector<double>& data) {
    for (std::size_t i = 0; i < n_bins; ++i) {
      const double m = std::max(model_value(problem.kind, out.params, grid_omega[i], q), 1e-300);
      const double d = 10.0 * (std::log10(m) - std::log10(data[i]));
      ssr_db += d * d;
      ++n_used;
    }
  };
  if (use_upper) accumulate_db(model::Quadrature::plus, traces.upper);
  if (use_lower) accumulate_db(model::Quadrature::minus, traces.lower);

  out.residual_rms_db = std::sqrt(ssr_db / static_cast<double>(n_used));
  out.ssr = lres.ssr;
  out.iterations = lres.iterations;
  out.converged = lres.converged;
  out.condition = lres.condition;
  out.near_threshold = model::near_threshold(out.params[p_chi], out.params[p_gamma]);
  out.message = lres.message;
  return out;
}

struct ProfilePoint {
  double value = 0.0;
  double ssr = 0.0;
};

struct ParameterProfile {
  std::size_t param = 0;
  std::string name;
  std::vector<ProfilePoint> points;
  double curvature = 0.0;      // d^2 SSR / d p^2 at the optimum
  double profile_sigma = 0.0;  // 1-sigma from the profile curvature
  bool degenerate = false;
};

struct IdentifiabilityReport {
  std::vector<ParameterProfile> profiles;
  bool degeneracy_warning = false;
};

// Profile-likelihood scan over eta and delta_phi. Fitting only the squeezing
// trace leaves the loss/phase-noise pair nearly interchangeable; the profile
// is then flat and the pair is flagged. The joint two-trace fit pins the
// anti-squeezing peak and breaks the degeneracy.
inline IdentifiabilityReport profile_identifiability(const FitProblem& problem,
                                                     const FitResult& result,
                                                     int points_per_side = 3) {
  if (!result.converged)
    throw std::invalid_argument("profile_identifiability: needs a converged result");

  IdentifiabilityReport report;
  const std::size_t n_res =
      problem.traces.frequencies_hz.size() * (problem.use == TraceUse::both ? 2 : 1);
  const double dof = std::max<double>(1.0, static_cast<double>(n_res) - 5.0);
  const double s2 = std::max(result.ssr / dof, 1e-6);  // floor: ~1e-3 dB rms resolution

  const std::array<std::size_t, 2> scan_params{p_eta, p_delta_phi};
  for (std::size_t p : scan_params) {
    if (problem.pinned[p]) continue;
    ParameterProfile prof;
    prof.param = p;
    prof.name = param_name(problem.kind, p);

    const double center = result.params[p];
    const double range = p == p_eta ? 0.04 : std::max(0.5 * std::abs(center), 0.01);
    for (int k = -points_per_side; k <= points_per_side; ++k) {
      double value = center + range * static_cast<double>(k) / points_per_side;
      if (p == p_eta) value = std::clamp(value, 1e-4, 1.0);
      if (p == p_delta_phi) value = std::clamp(value, 0.0, 1.2);

      FitProblem sub = problem;
      sub.pinned[p] = value;
      sub.init = result.params;
      const FitResult r = solve(sub);
      prof.points.push_back({value, r.ssr});
    }

    // quadratic regression ssr(d) = a0 + a1 d + a2 d^2 about the optimum
    double s00 = 0, s1 = 0, s2m = 0, s3 = 0, s4 = 0, sy = 0, sdy = 0, sd2y = 0;
    for (const auto& pt : prof.points) {
      const double d = pt.value - center;
      s00 += 1; s1 += d; s2m += d * d; s3 += d * d * d; s4 += d * d * d * d;
      sy += pt.ssr; sdy += d * pt.ssr; sd2y += d * d * pt.ssr;
    }
    // solve the 3x3 normal equations by elimination
    double m[3][4] = {{s00, s1, s2m, sy}, {s1, s2m, s3, sdy}, {s2m, s3, s4, sd2y}};
    for (int c = 0; c < 3; ++c) {
      int piv = c;
      for (int rr = c + 1; rr < 3; ++rr)
        if (std::abs(m[rr][c]) > std::abs(m[piv][c])) piv = rr;
      std::swap(m[c], m[piv]);
      if (std::abs(m[c][c]) < 1e-300) continue;
      for (int rr = 0; rr < 3; ++rr) {
        if (rr == c) continue;
        const double fac = m[rr][c] / m[c][c];
        for (int cc = c; cc < 4; ++cc) m[rr][cc] -= fac * m[c][cc];
      }
    }
    const double a2 = std::abs(m[2][2]) > 1e-300 ? m[2][3] / m[2][2] : 0.0;
    prof.curvature = 2.0 * a2;
    prof.profile_sigma = prof.curvature > 0.0
                             ? std::sqrt(2.0 * s2 / prof.curvature)
                             : std::numeric_limits<double>::infinity();
    // flat when the data cannot pin the parameter to a quarter of its
    // physical range (eta in (0,1], |delta_phi| well under pi/2)
    constexpr double flat_scale = 0.25;
    prof.degenerate = !(prof.curvature > 0.0) || prof.profile_sigma > flat_scale;
    report.degeneracy_warning = report.degeneracy_warning || prof.degenerate;
    report.profiles.push_back(std::move(prof));
  }
  return report;
}

}  // namespace sqzkit::fit
