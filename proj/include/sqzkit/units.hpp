#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqzkit {

inline constexpr double speed_of_light = 299'792'458.0;  // m/s
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// External interfaces speak ordinary frequency in hertz; every model
// evaluates in angular frequency. Conversions live here and nowhere else.
constexpr double omega_from_hz(double f_hz) noexcept { return two_pi * f_hz; }
constexpr double hz_from_omega(double omega) noexcept { return omega / two_pi; }

// Variances are power ratios against shot noise, hence 10*log10.
inline double db_from_linear(double v) {
  if (!(v > 0.0)) throw std::domain_error("db_from_linear: variance must be > 0");
  return 10.0 * std::log10(v);
}

inline double linear_from_db(double x_db) { return std::pow(10.0, x_db / 10.0); }

}  // namespace sqzkit
