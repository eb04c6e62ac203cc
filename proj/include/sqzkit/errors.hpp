#pragma once

#include <stdexcept>
#include <string>

namespace sqzkit {

// Parse failures in config/ledger/spectrum files. Carries a position when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
  ConfigError(const std::string& file, int line, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg) {}
};

// Data-plane failures: mismatched frequency grids, bad record contents.
class GridError : public std::runtime_error {
 public:
  explicit GridError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shot-noise normalization hit a non-positive reference bin.
class NormalizationError : public GridError {
 public:
  explicit NormalizationError(const std::string& msg) : GridError(msg) {}
};

// Fit-stage failures: featureless input or hard non-convergence.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

class NoFeatureError : public FitError {
 public:
  explicit NoFeatureError(const std::string& msg) : FitError(msg) {}
};

// Efficiency-ledger algebra produced an impossible value.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sqzkit
