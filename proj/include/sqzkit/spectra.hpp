#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqzkit/errors.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit::spectra {

struct RecordMeta {
  std::string label;
  std::int64_t acq_index = 0;
  std::optional<double> rbw_hz;
};

// One acquired power spectrum on a shared strictly-increasing grid.
// Power units are arbitrary but must be consistent across a campaign.
struct SpectrumRecord {
  std::vector<double> frequencies_hz;
  std::vector<double> power;
  RecordMeta meta;
};

inline void validate(const SpectrumRecord& r) {
  if (r.frequencies_hz.size() != r.power.size())
    throw GridError("spectrum '" + r.meta.label + "': frequency/power length mismatch");
  if (r.frequencies_hz.size() < 2)
    throw GridError("spectrum '" + r.meta.label + "': needs at least 2 bins");
  for (std::size_t i = 0; i + 1 < r.frequencies_hz.size(); ++i)
    if (!(r.frequencies_hz[i] < r.frequencies_hz[i + 1]))
      throw GridError("spectrum '" + r.meta.label + "': grid not strictly increasing");
  for (double p : r.power)
    if (!(p >= 0.0) || !std::isfinite(p))
      throw GridError("spectrum '" + r.meta.label + "': negative or non-finite power");
}

// Grids must be bit-identical; resampling would hide instrument errors.
inline void require_same_grid(const SpectrumRecord& a, const SpectrumRecord& b) {
  if (a.frequencies_hz != b.frequencies_hz)
    throw GridError("frequency grids differ between '" + a.meta.label + "' and '" +
                    b.meta.label + "'");
}

// Averaged upper (anti-squeezing) and lower (squeezing) traces in
// shot-noise units on one grid.
struct TracePair {
  std::vector<double> frequencies_hz;
  std::vector<double> upper;
  std::vector<double> lower;
};

inline void validate(const TracePair& t) {
  if (t.frequencies_hz.size() != t.upper.size() || t.frequencies_hz.size() != t.lower.size())
    throw GridError("trace pair: array length mismatch");
  if (t.frequencies_hz.size() < 2) throw GridError("trace pair: needs at least 2 bins");
  for (std::size_t i = 0; i + 1 < t.frequencies_hz.size(); ++i)
    if (!(t.frequencies_hz[i] < t.frequencies_hz[i + 1]))
      throw GridError("trace pair: grid not strictly increasing");
  for (std::size_t i = 0; i < t.lower.size(); ++i)
    if (!(t.lower[i] > 0.0) || !std::isfinite(t.lower[i]) || !std::isfinite(t.upper[i]))
      throw GridError("trace pair: traces must be positive and finite");
}

struct DarkSubtraction {
  SpectrumRecord corrected;
  std::size_t clamped_bins = 0;
};

// Linear-domain dark-noise subtraction. Over-subtracted bins are clamped to
// `floor_eps` and counted so downstream reports can flag them.
inline DarkSubtraction subtract_dark(const SpectrumRecord& signal, const SpectrumRecord& dark,
                                     double floor_eps = 1e-12) {
  validate(signal);
  validate(dark);
  require_same_grid(signal, dark);
  if (!(floor_eps > 0.0)) throw std::invalid_argument("subtract_dark: floor must be > 0");
  DarkSubtraction out{signal, 0};
  for (std::size_t i = 0; i < out.corrected.power.size(); ++i) {
    const double v = signal.power[i] - dark.power[i];
    if (v <= floor_eps) {
      out.corrected.power[i] = floor_eps;
      ++out.clamped_bins;
    } else {
      out.corrected.power[i] = v;
    }
  }
  return out;
}

// Shot-noise normalization: converts linear power to variance in shot-noise
// units. Both inputs must already be dark-subtracted.
inline SpectrumRecord normalize_shot(const SpectrumRecord& signal, const SpectrumRecord& shot) {
  validate(signal);
  validate(shot);
  require_same_grid(signal, shot);
  SpectrumRecord out = signal;
  for (std::size_t i = 0; i < out.power.size(); ++i) {
    if (!(shot.power[i] > 0.0))
      throw NormalizationError("normalize_shot: non-positive shot reference in bin " +
                               std::to_string(i) + " (" + std::to_string(shot.frequencies_hz[i]) +
                               " Hz)");
    out.power[i] = signal.power[i] / shot.power[i];
  }
  return out;
}

enum class RankMode { highest, lowest };
enum class RankStatistic { mean, median, center_power };

inline double ranking_statistic(const SpectrumRecord& r, RankStatistic stat) {
  switch (stat) {
    case RankStatistic::mean:
      return std::accumulate(r.power.begin(), r.power.end(), 0.0) /
             static_cast<double>(r.power.size());
    case RankStatistic::median: {
      std::vector<double> tmp = r.power;
      const std::size_t mid = tmp.size() / 2;
      std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid), tmp.end());
      if (tmp.size() % 2 == 1) return tmp[mid];
      const double hi = tmp[mid];
      const double lo = *std::max_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid));
      return 0.5 * (lo + hi);
    }
    case RankStatistic::center_power:
      return r.power[r.power.size() / 2];
  }
  throw std::invalid_argument("ranking_statistic: unknown statistic");
}

// Deterministic selection of the n most extreme records by noise level.
// Ties break by acquisition index ascending.
inline std::vector<SpectrumRecord> rank_select(const std::vector<SpectrumRecord>& ensemble,
                                               std::size_t n, RankMode mode,
                                               RankStatistic stat = RankStatistic::mean) {
  if (n == 0 || n > ensemble.size())
    throw std::invalid_argument("rank_select: n must be in [1, ensemble size]");
  for (std::size_t i = 1; i < ensemble.size(); ++i)
    require_same_grid(ensemble[0], ensemble[i]);

  std::vector<std::size_t> order(ensemble.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> stats(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) stats[i] = ranking_statistic(ensemble[i], stat);

  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (stats[a] != stats[b])
      return mode == RankMode::highest ? stats[a] > stats[b] : stats[a] < stats[b];
    return ensemble[a].meta.acq_index < ensemble[b].meta.acq_index;
  });

  std::vector<SpectrumRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(ensemble[order[i]]);
  return out;
}

// Element-wise arithmetic mean in the linear power domain.
inline SpectrumRecord average(const std::vector<SpectrumRecord>& records) {
  if (records.empty()) throw std::invalid_argument("average: empty record list");
  for (std::size_t i = 1; i < records.size(); ++i) require_same_grid(records[0], records[i]);
  SpectrumRecord out = records[0];
  out.meta.label = "average";
  for (std::size_t k = 1; k < records.size(); ++k)
    for (std::size_t i = 0; i < out.power.size(); ++i) out.power[i] += records[k].power[i];
  const double inv = 1.0 / static_cast<double>(records.size());
  for (double& p : out.power) p *= inv;
  return out;
}

struct ReductionOptions {
  RankStatistic statistic = RankStatistic::mean;
  // Dark clamp floor as a fraction of the mean dark-subtracted shot level.
  double floor_rel = 1e-6;
};

struct ReductionResult {
  TracePair traces;
  std::size_t clamped_bins = 0;
  double dark_clearance_db = 0.0;  // net shot over dark at the center bin
};

// The full measurement reduction: dark-subtract everything, select the n
// highest and n lowest spectra, average each group, normalize to shot noise.
inline ReductionResult reduce_campaign(const std::vector<SpectrumRecord>& ensemble,
                                       const SpectrumRecord& dark, const SpectrumRecord& shot,
                                       std::size_t n, ReductionOptions opt = {}) {
  if (ensemble.empty()) throw std::invalid_argument("reduce_campaign: empty ensemble");
  auto shot_net = subtract_dark(shot, dark);
  const double shot_level =
      std::accumulate(shot_net.corrected.power.begin(), shot_net.corrected.power.end(), 0.0) /
      static_cast<double>(shot_net.corrected.power.size());
  const double floor_eps = opt.floor_rel * shot_level;

  std::vector<SpectrumRecord> corrected;
  corrected.reserve(ensemble.size());
  std::size_t clamped = shot_net.clamped_bins;
  for (const auto& rec : ensemble) {
    auto sub = subtract_dark(rec, dark, floor_eps);
    clamped += sub.clamped_bins;
    corrected.push_back(std::move(sub.corrected));
  }

  const auto upper_set = rank_select(corrected, n, RankMode::highest, opt.statistic);
  const auto lower_set = rank_select(corrected, n, RankMode::lowest, opt.statistic);
  const auto upper = normalize_shot(average(upper_set), shot_net.corrected);
  const auto lower = normalize_shot(average(lower_set), shot_net.corrected);

  const std::size_t center = dark.power.size() / 2;
  ReductionResult out;
  out.traces = TracePair{upper.frequencies_hz, upper.power, lower.power};
  out.clamped_bins = clamped;
  out.dark_clearance_db = dark.power[center] > 0.0
                              ? db_from_linear(shot_net.corrected.power[center] / dark.power[center])
                              : std::numeric_limits<double>::infinity();
  validate(out.traces);
  return out;
}

}  // namespace sqzkit::spectra
