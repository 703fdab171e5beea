#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tradeshock/employment.hpp"
#include "tradeshock/equilibrium.hpp"
#include "tradeshock/world.hpp"

namespace tradeshock {

/// Settings echoed into every report header.
struct RunMetadata {
  std::string scenario;
  ModelParameters params;
  SolverConfig solver;
  int iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  std::uint64_t world_hash = 0;
  std::vector<std::string> warnings;
};

/// Everything the per-scenario tables are derived from.
struct ScenarioResult {
  RunMetadata meta;
  DeltaReport deltas;
  EmploymentReport employment;
  std::vector<AggregateRow> exports_by_income_group;
  AggregateRow total_exports;
};

/// Country exports aggregated to income groups (plus a total).
std::vector<AggregateRow> exports_by_income_group(const CalibratedWorld& world,
                                                  const DeltaReport& deltas);

ScenarioResult analyse(const CalibratedWorld& world, const EquilibriumState& baseline,
                       const EquilibriumState& shocked, RunMetadata meta);

struct ReportOptions {
  std::size_t top_k = 15;
  bool timestamp = true;
};

/// "0123456789abcdef".
std::string format_hash(std::uint64_t hash);

/// Fixed-point text: absolute values with 3 decimals, percentages with 2.
/// NaN becomes an empty field.
std::string format_fixed(double value, int decimals);

/// Writes the table suite and summary.json into `dir` (created if needed):
/// employment_by_income_group.csv, exports_by_income_group.csv,
/// top_countries.csv, top_sectors.csv, labour_groups.csv, cell_deltas.csv.
void write_scenario_report(const std::filesystem::path& dir, const CalibratedWorld& world,
                           const ScenarioResult& result, const ReportOptions& options);

/// Baseline levels by income group and by cell.
void write_baseline_report(const std::filesystem::path& dir, const CalibratedWorld& world,
                           const EquilibriumState& baseline, const RunMetadata& meta,
                           const ReportOptions& options);

/// Side-by-side employment by income group across completed runs (value
/// and percentage column per run). Throws DimensionError when runs come from
/// different worlds and IoError when a run directory lacks summary.json.
std::string compare_runs(const std::vector<std::filesystem::path>& run_dirs);

}  // namespace tradeshock
