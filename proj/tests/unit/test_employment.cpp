#include "doctest.h"
#include "fixtures.hpp"
#include "tradeshock/employment.hpp"
#include "tradeshock/error.hpp"

using namespace tradeshock;

namespace {

EmploymentSatellite uniform_satellite(std::size_t dim, double jobs, double share) {
  EmploymentSatellite s;
  s.jobs_per_output = Vector::Constant(static_cast<Eigen::Index>(dim), jobs);
  for (auto& v : s.first_group_share) v = Vector::Constant(static_cast<Eigen::Index>(dim), share);
  return s;
}

}  // namespace

TEST_SUITE("employment") {
  TEST_CASE("levels") {
    const auto sat = uniform_satellite(1, 2.0, 0.5);
    CHECK(employment_levels(sat, Vector::Constant(1, 50.0))[0] == 100.0);
    CHECK(employment_levels(sat, Vector::Zero(1))[0] == 0.0);
    CHECK_THROWS_AS(employment_levels(sat, Vector::Zero(2)), DimensionError);
  }

  TEST_CASE("fixture totals match recorded employment") {
    FixtureOptions opt;
    opt.seed = 33;
    opt.countries = 6;
    opt.sectors = 5;
    const Fixture f = generate_fixture(opt);
    const double total = employment_levels(f.dataset.satellite, f.recorded_output).sum();
    CHECK(total == doctest::Approx(f.total_employment).epsilon(1e-12));
  }

  TEST_CASE("single-cell change") {
    const WorldDims dims({"A"}, {"S1", "S2"});
    const IncomeGroups groups(dims, {"G"});
    const auto sat = uniform_satellite(2, 2.0, 0.3);
    Vector x0(2), x1(2);
    x0 << 100, 50;
    x1 << 95, 50;
    const auto r = employment_delta(sat, dims, groups, x0, x1);
    CHECK(r.delta[0] == -10.0);
    CHECK(r.delta[1] == 0.0);
    CHECK(r.total.delta == -10.0);
    CHECK(r.total.pct == doctest::Approx(-10.0 / 300.0 * 100.0));
    const auto none = employment_delta(sat, dims, groups, x0, x0);
    CHECK(none.delta.isZero());
    CHECK(none.total_losses == 0.0);
  }

  TEST_CASE("loss shares weight group composition by cell losses") {
    const WorldDims dims({"A"}, {"S1", "S2"});
    const IncomeGroups groups(dims, {"G"});
    auto sat = uniform_satellite(2, 1.0, 0.5);
    // Informal shares 0.6 and 0.4, so formal shares 0.4 and 0.6.
    sat.first_group_share[0] << 0.4, 0.6;
    Vector x0(2), x1(2);
    x0 << 100, 100;
    x1 << 90, 90;
    const auto r = employment_delta(sat, dims, groups, x0, x1);
    REQUIRE(r.group_distribution.size() == 8);
    CHECK(r.group_distribution[0].label == "Formal");
    CHECK(r.group_distribution[1].label == "Informal");
    CHECK(r.group_distribution[1].pct == doctest::Approx(50.0).epsilon(1e-14));
  }

  TEST_CASE("decomposition conserves each cell and partitions sum to 100%") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      FixtureOptions opt;
      opt.seed = seed;
      opt.countries = 5;
      opt.sectors = 6;
      const Fixture f = generate_fixture(opt);
      const auto w = calibrate(f.dataset);
      Vector shocked = w.recorded_output;
      for (Eigen::Index i = 0; i < shocked.size(); ++i) {
        shocked[i] *= 1.0 + 0.1 * std::sin(static_cast<double>(i * seed));
      }
      const auto r = employment_delta(w.satellite, w.dims, w.income_groups, w.recorded_output, shocked);
      for (const auto& parts : r.decomposition) {
        for (Eigen::Index i = 0; i < parts.rows(); ++i) {
          CHECK(parts(i, 0) + parts(i, 1) == r.delta[i]);
        }
      }
      for (std::size_t p = 0; p < 4; ++p) {
        const double sum = r.group_distribution[2 * p].pct + r.group_distribution[2 * p + 1].pct;
        CHECK(std::abs(sum - 100.0) <= 0.01);
      }
    }
  }

  TEST_CASE("aggregation is consistent across levels") {
    const auto w = support::make_world(19, 7, 4);
    Vector shocked = w.recorded_output * 0.97;
    shocked[3] *= 1.2;
    const auto r = employment_delta(w.satellite, w.dims, w.income_groups, w.recorded_output, shocked);
    double by_country = 0.0, by_sector = 0.0, by_group = 0.0;
    for (const auto& row : r.by_country) by_country += row.delta;
    for (const auto& row : r.by_sector) by_sector += row.delta;
    for (const auto& row : r.by_income_group) by_group += row.delta;
    CHECK(by_country == doctest::Approx(r.delta.sum()).epsilon(1e-12));
    CHECK(by_sector == doctest::Approx(r.delta.sum()).epsilon(1e-12));
    CHECK(by_group == doctest::Approx(r.total.delta).epsilon(1e-12));
    // Direct cell-to-group sum.
    std::vector<double> direct(w.income_groups.groups().size(), 0.0);
    for (std::size_t i = 0; i < w.dims.size(); ++i) {
      direct[w.income_groups.group_index(w.dims.country_of(i))] += r.delta[static_cast<Eigen::Index>(i)];
    }
    for (std::size_t g = 0; g < direct.size(); ++g) {
      CHECK(r.by_income_group[g].delta == doctest::Approx(direct[g]).epsilon(1e-12));
    }
  }

  TEST_CASE("scaling coefficients scales levels and keeps percentages") {
    const auto w = support::make_world(20, 4, 3);
    const Vector shocked = w.recorded_output * 0.95;
    const auto a = employment_delta(w.satellite, w.dims, w.income_groups, w.recorded_output, shocked);
    const auto b = employment_delta(w.satellite.scaled(2.0), w.dims, w.income_groups,
                                    w.recorded_output, shocked);
    CHECK(b.total.delta == doctest::Approx(2.0 * a.total.delta).epsilon(1e-14));
    CHECK(b.total.pct == doctest::Approx(a.total.pct).epsilon(1e-12));
    for (std::size_t g = 0; g < 8; ++g) {
      CHECK(b.group_distribution[g].pct == doctest::Approx(a.group_distribution[g].pct).epsilon(1e-12));
    }
  }

  TEST_CASE("zero-baseline cells report absolute change only") {
    const WorldDims dims({"A"}, {"S1"});
    auto sat = uniform_satellite(1, 0.0, 0.5);
    const auto r = employment_delta(sat, dims, IncomeGroups(dims, {"G"}), Vector::Constant(1, 10.0),
                                    Vector::Constant(1, 5.0));
    CHECK(std::isnan(r.pct[0]));
    CHECK(std::isnan(r.total.pct));
  }

  TEST_CASE("top-k ranking") {
    const WorldDims dims({"AAA", "BBB", "CCC", "DDD"}, {"S1"});
    const IncomeGroups groups(dims, {"G", "G", "H", "H"});
    const auto sat = uniform_satellite(4, 1.0, 0.5);
    Vector x0 = Vector::Constant(4, 100.0), x1(4);
    x1 << 95, 90, 95, 101;
    const auto r = employment_delta(sat, dims, groups, x0, x1);

    const auto all = top_k(r, RankDimension::Country, 10);
    REQUIRE(all.rows.size() == 4);
    CHECK(all.rows[0].label == "BBB");
    CHECK(all.rows[1].label == "AAA");  // tie with CCC keeps code order
    CHECK(all.rows[2].label == "CCC");
    CHECK(all.rows[3].label == "DDD");

    const auto top2 = top_k(r, RankDimension::Country, 2);
    CHECK(top2.subtotal.delta == -15.0);
    double remainder = 0.0;
    for (std::size_t k = 2; k < all.rows.size(); ++k) remainder += all.rows[k].delta;
    CHECK(top2.subtotal.delta + remainder == top2.total.delta);
    CHECK_THROWS_AS(top_k(r, RankDimension::Sector, 0), DimensionError);
  }

  TEST_CASE("satellite validation") {
    auto sat = uniform_satellite(2, 1.0, 0.5);
    CHECK_NOTHROW(sat.validate(2));
    CHECK_THROWS(sat.validate(3));
    sat.first_group_share[2][1] = 1.2;
    CHECK_THROWS(sat.validate(2));
  }
}
