#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tradeshock/block_matrix.hpp"
#include "tradeshock/employment.hpp"
#include "tradeshock/error.hpp"
#include "tradeshock/income_groups.hpp"
#include "tradeshock/world.hpp"

namespace tradeshock {

/// A world table as read from disk, before calibration.
///
/// The origin-resolved intermediate matrix is not kept: it is aggregated on
/// load into the domestic-use matrix Z (block-diagonal, summed over origins)
/// and the bilateral allocation ALL (intermediate plus final use of each
/// origin's commodity in each destination).
struct WorldDataset {
  WorldDims dims;
  BlockMatrix intermediate;                // Z, block-diagonal by destination
  BlockMatrix allocation;                  // ALL
  Eigen::MatrixXd final_demand_by_origin;  // Nn x N: supplier (o,y) to destination country d
  Vector value_added;
  Vector gross_output;
  EmploymentSatellite satellite;
  IncomeGroups income_groups;
  /// Row sums of the origin-resolved intermediate matrix, kept for the row balance.
  Vector intermediate_sales;

  /// Final demand per (destination, commodity), summed over origins.
  Vector final_demand() const;
};

/// Balance tolerance, relative to max(1, |x_i|).
inline constexpr double kBalanceTolerance = 1e-6;

/// Reads dims.csv and checks its layout.
WorldDims load_dims(const std::filesystem::path& dir);

/// Loads and validates a world directory. Missing files throw IoError;
/// schema, sign and balance problems are collected and thrown together as
/// a DataError.
WorldDataset load_world(const std::filesystem::path& dir);

/// Balance and sign checks on an in-memory dataset. Empty when valid.
std::vector<Diagnostic> validate(const WorldDataset& dataset);

/// Writes the canonical CSV files; load_world(dir) reads them back.
void write_world(const WorldDataset& dataset, const std::filesystem::path& dir);

struct FixtureOptions {
  std::uint64_t seed = 1;
  std::size_t countries = 3;
  std::size_t sectors = 2;
  double sparsity = 0.2;        // share of foreign links set to zero, in [0, 1)
  double trade_openness = 0.3;  // 0 gives autarky, in [0, 1]
  /// Codes to use instead of R01.. / S01..; lengths must match.
  std::optional<std::vector<std::string>> country_codes;
  std::optional<std::vector<std::string>> sector_codes;
};

struct Fixture {
  WorldDataset dataset;
  Vector recorded_output;   // x solved by the generator
  double total_employment;  // thousand jobs at x
};

/// Balanced synthetic world, deterministic for a given seed. Throws
/// DimensionError/ScenarioError on infeasible options.
Fixture generate_fixture(const FixtureOptions& options);

/// Technical coefficients, trade shares and destination final demand.
/// Destination-commodity pairs with no supply at all are treated as fully
/// domestic.
CalibratedWorld calibrate(const WorldDataset& dataset);

}  // namespace tradeshock
