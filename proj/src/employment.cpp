#include "tradeshock/employment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tradeshock/error.hpp"

namespace tradeshock {

namespace {

// Rounds `part` to a multiple of ulp(whole). With |part| <= |whole| the
// remainder whole - part is then exact and the two halves add back to whole.
double on_grid(double part, double whole) {
  if (whole == 0.0 || !std::isnormal(whole)) return part;
  const double ulp = std::ldexp(1.0, std::ilogb(whole) - std::numeric_limits<double>::digits + 1);
  return std::nearbyint(part / ulp) * ulp;
}

}  // namespace

std::array<std::string_view, 2> partition_labels(Partition p) noexcept {
  switch (p) {
    case Partition::Formality: return {"Formal", "Informal"};
    case Partition::Skill: return {"Skilled", "Unskilled"};
    case Partition::Age: return {"Adult", "Youth"};
    case Partition::Sex: return {"Male", "Female"};
  }
  return {"?", "?"};
}

void EmploymentSatellite::validate(std::size_t dim) const {
  if (static_cast<std::size_t>(jobs_per_output.size()) != dim) {
    throw DimensionError("satellite: expected " + std::to_string(dim) + " coefficients");
  }
  for (Eigen::Index i = 0; i < jobs_per_output.size(); ++i) {
    if (!std::isfinite(jobs_per_output[i]) || jobs_per_output[i] < 0.0) {
      throw DimensionError("satellite: coefficient " + std::to_string(i) +
                           " must be finite and non-negative");
    }
  }
  for (const Vector& share : first_group_share) {
    if (static_cast<std::size_t>(share.size()) != dim) {
      throw DimensionError("satellite: group share vector has the wrong length");
    }
    for (Eigen::Index i = 0; i < share.size(); ++i) {
      if (!(share[i] >= 0.0 && share[i] <= 1.0)) {
        throw DimensionError("satellite: group share " + std::to_string(share[i]) +
                             " outside [0, 1]");
      }
    }
  }
}

EmploymentSatellite EmploymentSatellite::scaled(double factor) const {
  EmploymentSatellite out(*this);
  out.jobs_per_output *= factor;
  return out;
}

Vector employment_levels(const EmploymentSatellite& satellite, const Vector& gross_output) {
  if (satellite.jobs_per_output.size() != gross_output.size()) {
    throw DimensionError("employment_levels: satellite and output lengths differ");
  }
  return satellite.jobs_per_output.cwiseProduct(gross_output);
}

AggregateRow make_row(std::string label, double baseline, double delta) {
  const double pct =
      baseline != 0.0 ? 100.0 * delta / baseline : std::numeric_limits<double>::quiet_NaN();
  return {std::move(label), baseline, delta, pct};
}

EmploymentReport employment_delta(const EmploymentSatellite& satellite, const WorldDims& dims,
                                  const IncomeGroups& groups, const Vector& base_x,
                                  const Vector& shocked_x) {
  const std::size_t dim = dims.size();
  satellite.validate(dim);
  if (static_cast<std::size_t>(base_x.size()) != dim ||
      static_cast<std::size_t>(shocked_x.size()) != dim) {
    throw DimensionError("employment_delta: output vectors do not match the world dims");
  }
  if (groups.countries() != dims.countries()) {
    throw DimensionError("employment_delta: income groups do not match the world dims");
  }

  EmploymentReport r;
  r.baseline = employment_levels(satellite, base_x);
  r.delta = satellite.jobs_per_output.cwiseProduct(shocked_x - base_x);
  r.pct.resize(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < r.pct.size(); ++i) {
    r.pct[i] = make_row({}, r.baseline[i], r.delta[i]).pct;
  }

  for (Partition p : kPartitions) {
    const Vector& share = satellite.first_group_share[static_cast<std::size_t>(p)];
    Eigen::MatrixX2d parts(static_cast<Eigen::Index>(dim), 2);
    for (Eigen::Index i = 0; i < parts.rows(); ++i) {
      parts(i, 0) = on_grid(share[i] * r.delta[i], r.delta[i]);
      parts(i, 1) = r.delta[i] - parts(i, 0);
    }
    r.decomposition[static_cast<std::size_t>(p)] = std::move(parts);
  }

  const std::size_t big_n = dims.countries();
  const std::size_t n = dims.sectors();
  r.by_country.reserve(big_n);
  for (std::size_t c = 0; c < big_n; ++c) {
    double base = 0.0, delta = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      base += r.baseline[static_cast<Eigen::Index>(dims.index(c, s))];
      delta += r.delta[static_cast<Eigen::Index>(dims.index(c, s))];
    }
    r.by_country.push_back(make_row(dims.country_codes()[c], base, delta));
  }
  r.by_sector.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    double base = 0.0, delta = 0.0;
    for (std::size_t c = 0; c < big_n; ++c) {
      base += r.baseline[static_cast<Eigen::Index>(dims.index(c, s))];
      delta += r.delta[static_cast<Eigen::Index>(dims.index(c, s))];
    }
    r.by_sector.push_back(make_row(dims.sector_codes()[s], base, delta));
  }

  // Groups and the total are sums of country rows in code order.
  std::vector<double> group_base(groups.groups().size(), 0.0);
  std::vector<double> group_delta(groups.groups().size(), 0.0);
  double total_base = 0.0, total_delta = 0.0;
  for (std::size_t c = 0; c < big_n; ++c) {
    group_base[groups.group_index(c)] += r.by_country[c].baseline;
    group_delta[groups.group_index(c)] += r.by_country[c].delta;
    total_base += r.by_country[c].baseline;
    total_delta += r.by_country[c].delta;
  }
  for (std::size_t g = 0; g < groups.groups().size(); ++g) {
    r.by_income_group.push_back(make_row(groups.groups()[g], group_base[g], group_delta[g]));
  }
  r.total = make_row("Total", total_base, total_delta);

  for (Eigen::Index i = 0; i < r.delta.size(); ++i) {
    if (r.delta[i] < 0.0) r.total_losses += r.delta[i];
  }
  for (Partition p : kPartitions) {
    const auto& parts = r.decomposition[static_cast<std::size_t>(p)];
    const auto labels = partition_labels(p);
    for (int g = 0; g < 2; ++g) {
      double jobs = 0.0;
      for (Eigen::Index i = 0; i < parts.rows(); ++i) {
        if (r.delta[i] < 0.0) jobs += parts(i, g);
      }
      const double pct = r.total_losses < 0.0 ? 100.0 * jobs / r.total_losses : 0.0;
      r.group_distribution.push_back({std::string(labels[static_cast<std::size_t>(g)]), jobs, pct});
    }
  }
  return r;
}

RankedTable top_k(const EmploymentReport& report, RankDimension dimension, std::size_t k) {
  if (k == 0) throw DimensionError("top_k: k must be at least 1");
  const auto& population =
      dimension == RankDimension::Country ? report.by_country : report.by_sector;

  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return population[a].delta < population[b].delta;
  });

  RankedTable table;
  double sub_base = 0.0, sub_delta = 0.0;
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) {
    const AggregateRow& row = population[order[i]];
    table.rows.push_back(row);
    sub_base += row.baseline;
    sub_delta += row.delta;
  }
  double total_base = 0.0, total_delta = 0.0;
  for (const auto& row : population) {
    total_base += row.baseline;
    total_delta += row.delta;
  }
  table.subtotal = make_row("Sub-total", sub_base, sub_delta);
  table.total = make_row("Total", total_base, total_delta);
  return table;
}

}  // namespace tradeshock
