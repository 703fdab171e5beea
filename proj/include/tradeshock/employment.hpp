#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "tradeshock/block_matrix.hpp"
#include "tradeshock/income_groups.hpp"
#include "tradeshock/world_dims.hpp"

namespace tradeshock {

/// Binary labour-group partitions carried by the satellite account.
enum class Partition { Formality = 0, Skill = 1, Age = 2, Sex = 3 };

inline constexpr std::array<Partition, 4> kPartitions = {Partition::Formality, Partition::Skill,
                                                         Partition::Age, Partition::Sex};

/// {first, second} group labels, e.g. {"Formal", "Informal"}.
std::array<std::string_view, 2> partition_labels(Partition p) noexcept;

/// Jobs per unit of gross output and labour-group composition per cell.
/// Only the first group's share of each partition is stored; the second is
/// its complement.
struct EmploymentSatellite {
  Vector jobs_per_output;                   // thousand jobs per unit of output
  std::array<Vector, 4> first_group_share;  // formal, skilled, adult, male

  /// Shares in [0, 1], coefficients non-negative and finite, lengths == dim.
  void validate(std::size_t dim) const;
  EmploymentSatellite scaled(double factor) const;
};

/// L = jobs_per_output .* x.
Vector employment_levels(const EmploymentSatellite& satellite, const Vector& gross_output);

/// Baseline level, change, and percentage change of an aggregate.
/// pct is NaN when the baseline is zero (absolute-only reporting).
struct AggregateRow {
  std::string label;
  double baseline = 0.0;
  double delta = 0.0;
  double pct = 0.0;
};

AggregateRow make_row(std::string label, double baseline, double delta);

/// Share of net job losses attributed to one labour group.
struct GroupShareRow {
  std::string label;
  double jobs = 0.0;  // thousand jobs (negative for losses)
  double pct = 0.0;   // percent of total losses over loss cells
};

struct EmploymentReport {
  Vector baseline;  // per cell
  Vector delta;
  Vector pct;       // NaN for zero-baseline cells
  /// Per partition, column 0 is the first group's part of delta and column 1
  /// is delta minus that part, so the two add back to delta.
  std::array<Eigen::MatrixX2d, 4> decomposition;

  std::vector<AggregateRow> by_country;
  std::vector<AggregateRow> by_sector;
  std::vector<AggregateRow> by_income_group;
  AggregateRow total;

  /// Eight rows (two per partition) computed over cells with net losses.
  std::vector<GroupShareRow> group_distribution;
  double total_losses = 0.0;  // sum of delta over loss cells (<= 0)
};

/// Employment changes of moving from base_x to shocked_x with fixed
/// coefficients, aggregated by country, sector and income group.
EmploymentReport employment_delta(const EmploymentSatellite& satellite, const WorldDims& dims,
                                  const IncomeGroups& groups, const Vector& base_x,
                                  const Vector& shocked_x);

enum class RankDimension { Country, Sector };

struct RankedTable {
  std::vector<AggregateRow> rows;  // most negative delta first
  AggregateRow subtotal;           // over `rows`
  AggregateRow total;              // over the full population
};

/// Top-k most affected countries or sectors; ties keep code order.
RankedTable top_k(const EmploymentReport& report, RankDimension dimension, std::size_t k);

}  // namespace tradeshock
