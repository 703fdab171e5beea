#pragma once

#include <cstdint>

#include "tradeshock/block_matrix.hpp"
#include "tradeshock/employment.hpp"
#include "tradeshock/income_groups.hpp"

namespace tradeshock {

/// Model inputs derived from a validated dataset: technical coefficients,
/// baseline trade shares, destination final demand and the satellite.
/// Immutable once built and safe to share across concurrent scenario solves.
struct CalibratedWorld {
  WorldDims dims;
  BlockMatrix coefficients;   // A
  BlockMatrix base_shares;    // T at baseline
  Vector base_final_demand;   // per (destination, commodity)
  Vector recorded_output;     // gross output as recorded in the data
  EmploymentSatellite satellite;
  IncomeGroups income_groups;

  /// Stable 64-bit FNV-1a hash of codes, A, T, final demand and output.
  std::uint64_t fingerprint() const;
};

/// Per-commodity elasticities.
struct ModelParameters {
  Vector sigma;    // Armington elasticity of substitution, > 1
  Vector epsilon;  // own-price final demand elasticity

  static constexpr double kDefaultSigma = 4.0;
  static constexpr double kDefaultEpsilon = -0.5;

  static ModelParameters defaults(std::size_t sectors);
  void validate(std::size_t sectors) const;
};

}  // namespace tradeshock
