#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqzkit/errors.hpp"
#include "sqzkit/noise_model.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit::budget {

enum class FactorStatus { measured, inferred };

// One multiplicative efficiency. An inferred factor starts unresolved
// (value NaN) until infer_factor fills it from the overall budget.
struct Factor {
  std::string name;
  double value = std::numeric_limits<double>::quiet_NaN();
  FactorStatus status = FactorStatus::measured;

  bool resolved() const { return std::isfinite(value); }
};

struct EfficiencyLedger {
  std::vector<Factor> factors;

  const Factor* find(const std::string& name) const {
    for (const auto& f : factors)
      if (f.name == name) return &f;
    return nullptr;
  }
};

inline void validate(const EfficiencyLedger& ledger) {
  int unresolved = 0;
  for (const auto& f : ledger.factors) {
    if (f.resolved()) {
      if (!(f.value > 0.0 && f.value <= 1.0))
        throw BudgetError("ledger factor '" + f.name + "' outside (0, 1]");
    } else {
      if (f.status != FactorStatus::inferred)
        throw BudgetError("ledger factor '" + f.name + "' has no value and is not inferred");
      ++unresolved;
    }
  }
  if (unresolved > 1) throw BudgetError("ledger has more than one unresolved inferred factor");
}

// Product of all factors; requires a fully resolved ledger.
inline double total_efficiency(const EfficiencyLedger& ledger) {
  if (ledger.factors.empty()) throw std::invalid_argument("total_efficiency: empty ledger");
  validate(ledger);
  double product = 1.0;
  for (const auto& f : ledger.factors) {
    if (!f.resolved())
      throw std::invalid_argument("total_efficiency: ledger has an unresolved inferred factor");
    product *= f.value;
  }
  return product;
}

// Solves the one unresolved factor from the overall budget:
// inferred = total / product(others). A result outside (0, 1] means the
// stated budget cannot be met by any physical efficiency.
inline EfficiencyLedger infer_factor(const EfficiencyLedger& ledger, double total) {
  validate(ledger);
  int idx = -1;
  double others = 1.0;
  for (std::size_t i = 0; i < ledger.factors.size(); ++i) {
    if (!ledger.factors[i].resolved()) {
      idx = static_cast<int>(i);
    } else {
      others *= ledger.factors[i].value;
    }
  }
  if (idx < 0) throw std::invalid_argument("infer_factor: no unresolved inferred factor");
  const double inferred = total / others;
  if (!(inferred > 0.0 && inferred <= 1.0 + 1e-12))
    throw BudgetError("infer_factor: inconsistent budget, factor '" + ledger.factors[idx].name +
                      "' would be " + std::to_string(inferred));
  EfficiencyLedger out = ledger;
  out.factors[static_cast<std::size_t>(idx)].value = std::min(inferred, 1.0);
  return out;
}

// Output-coupler transmissivity plus the round-trip intracavity losses of
// one cavity. Double-pass elements enter as 2x their single-pass loss.
struct CavityLossSheet {
  double t_out = 0.0;
  std::vector<std::pair<std::string, double>> intra_losses;
  double length = 0.0;  // one-way optical length, m

  double loss_sum() const {
    double s = 0.0;
    for (const auto& [name, value] : intra_losses) s += value;
    return s;
  }
};

inline void validate(const CavityLossSheet& sheet) {
  if (!(sheet.t_out >= 0.0 && sheet.t_out < 1.0))
    throw BudgetError("loss sheet: t_out must be in [0, 1)");
  for (const auto& [name, value] : sheet.intra_losses)
    if (!(value >= 0.0 && value < 1.0))
      throw BudgetError("loss sheet: loss '" + name + "' must be in [0, 1)");
  if (!(sheet.t_out + sheet.loss_sum() < 1.0))
    throw BudgetError("loss sheet: total transmission plus losses must be < 1");
}

// Fraction of the intracavity squeezed field leaving through the output coupler.
inline double escape_efficiency(const CavityLossSheet& sheet) {
  validate(sheet);
  if (!(sheet.t_out > 0.0)) throw std::domain_error("escape_efficiency: t_out must be > 0");
  return sheet.t_out / (sheet.t_out + sheet.loss_sum());
}

// Amplitude decay rate gamma = c (T_out + sum L) / (4 L), the standard
// low-loss relation; cross-checked against the fitted rates in tests.
inline double decay_rate(const CavityLossSheet& sheet) {
  validate(sheet);
  if (!(sheet.length > 0.0)) throw BudgetError("decay_rate: cavity length must be > 0");
  return speed_of_light * (sheet.t_out + sheet.loss_sum()) / (4.0 * sheet.length);
}

// FSR in hertz for a one-way optical path `length`.
inline double free_spectral_range(double length) {
  if (!(length > 0.0)) throw std::invalid_argument("free_spectral_range: length must be > 0");
  return speed_of_light / (2.0 * length);
}

struct Forecast {
  double ratio = 0.0;         // optimal chi/gamma
  double squeezing_db = 0.0;  // detected minus-quadrature level at the optimum
  bool boundary = false;      // no interior optimum: supremum at chi/gamma -> 1
};

// Best achievable squeezing for a given loss budget and phase noise,
// optimizing the pump ratio x = chi/gamma at zero detuning. In the lossless,
// noiseless limit the objective decreases monotonically toward threshold and
// only a boundary supremum exists.
inline Forecast forecast_best_squeezing(const EfficiencyLedger& ledger, double delta_phi) {
  const double eta = total_efficiency(ledger);
  const model::DetectionParams det{eta, delta_phi};
  auto detected_db = [&](double x) {
    // v_single at delta = 0 with gamma scaled out: V+- depend on x only.
    const double a = (1.0 + x) * (1.0 + x);
    const double b = (1.0 - x) * (1.0 - x);
    const model::QuadraturePair v{a / b, b / a};
    return db_from_linear(model::v_detected(v, det, model::Quadrature::minus));
  };

  constexpr double x_lo = 1e-9;
  constexpr double x_hi = 1.0 - 1e-9;
  constexpr std::size_t n_scan = 4001;
  double best_x = x_lo, best = detected_db(x_lo);
  for (std::size_t i = 1; i < n_scan; ++i) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / (n_scan - 1);
    const double v = detected_db(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  const double step = (x_hi - x_lo) / (n_scan - 1);
  const double x_star = model::detail::golden_min(
      detected_db, std::max(x_lo, best_x - step), std::min(x_hi, best_x + step), 1e-12);

  Forecast out;
  out.ratio = x_star;
  out.squeezing_db = detected_db(x_star);
  // Optimum pinned to the scan's last cell means the objective is still
  // decreasing at threshold: report the boundary condition instead.
  out.boundary = x_star > x_hi - 2.0 * step;
  return out;
}

}  // namespace sqzkit::budget
