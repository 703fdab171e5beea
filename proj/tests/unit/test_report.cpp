#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "tradeshock/data_io.hpp"
#include "tradeshock/registry.hpp"
#include "tradeshock/report.hpp"
#include "tradeshock/scenario.hpp"

using namespace tradeshock;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

using Table = std::vector<std::vector<std::string>>;

// Data rows of a report CSV, header first, comment lines dropped.
Table read_table(const fs::path& p) {
  std::ifstream in(p);
  Table t;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    t.push_back(std::move(fields));
  }
  return t;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  CalibratedWorld world;
  EquilibriumState base;
  EquilibriumState shocked;
  ScenarioResult result;
};

Run run(const CalibratedWorld& world, const TariffTensor& tariffs, const std::string& name) {
  RunMetadata meta;
  meta.scenario = name;
  meta.params = ModelParameters::defaults(world.dims.sectors());
  meta.world_hash = world.fingerprint();
  EquilibriumState base = solve_baseline(world);
  EquilibriumState shocked = solve_scenario(world, tariffs, meta.params, meta.solver, &base);
  meta.iterations = shocked.iterations;
  meta.status = shocked.status;
  ScenarioResult result = analyse(world, base, shocked, meta);
  return Run{world, std::move(base), std::move(shocked), std::move(result)};
}

ReportOptions fixed_options() {
  ReportOptions o;
  o.timestamp = false;
  o.top_k = 3;
  return o;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("number formatting") {
    CHECK(format_fixed(1.23456, 3) == "1.235");
    CHECK(format_fixed(-0.0001, 3) == "0.000");
    CHECK(format_fixed(-2.5, 2) == "-2.50");
    CHECK(format_fixed(std::nan(""), 2).empty());
    CHECK(format_hash(0x1f) == "000000000000001f");
  }

  TEST_CASE("zero tariffs give all-zero tables") {
    const auto world = support::make_coded_world(1, {"USA", "CHN", "VNM", "DEU"}, {"A01_02", "C24"});
    TempDir dir("tradeshock_report_zero");
    const auto r = run(world, TariffTensor(world.dims), "zero");
    write_scenario_report(dir.path, world, r.result, fixed_options());
    for (const char* name : {"employment_by_income_group.csv", "exports_by_income_group.csv",
                             "top_countries.csv", "top_sectors.csv"}) {
      CAPTURE(name);
      const Table t = read_table(dir.path / name);
      REQUIRE(t.size() > 1);
      const std::size_t delta_col = t[0].size() - 2;
      for (std::size_t k = 1; k < t.size(); ++k) {
        CHECK(t[k][delta_col] == "0.000");
        CHECK(t[k].back() == "0.00");
      }
    }
    const Table labour = read_table(dir.path / "labour_groups.csv");
    for (std::size_t k = 1; k < labour.size(); ++k) CHECK(labour[k][2] == "0.000");
  }

  TEST_CASE("cell table reproduces the solver deltas exactly") {
    const auto world = support::make_world(4, 4, 3);
    TempDir dir("tradeshock_report_cells");
    const auto r = run(world, support::unilateral_tariff(world.dims, 0, 0.25), "cells");
    write_scenario_report(dir.path, world, r.result, fixed_options());
    const Table t = read_table(dir.path / "cell_deltas.csv");
    REQUIRE(t.size() == world.dims.size() + 1);
    const DeltaReport d = diff_states(r.base, r.shocked);
    for (std::size_t i = 0; i < world.dims.size(); ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      const auto& row = t[i + 1];
      CHECK(row[0] == world.dims.country_codes()[world.dims.country_of(i)]);
      CHECK(std::stod(row[2]) == d.output.baseline[e]);
      CHECK(std::stod(row[3]) == d.output.delta[e]);
      CHECK(std::stod(row[6]) == d.exports.delta[e]);
      CHECK(std::stod(row[9]) == d.final_demand.delta[e]);
      CHECK(std::stod(row[12]) == r.result.employment.delta[e]);
    }
  }

  TEST_CASE("tables are internally consistent") {
    const auto world = support::make_coded_world(
        3, {"USA", "CHN", "VNM", "DEU", "MEX", "IND"}, {"A01_02", "C24", "C29"});
    TempDir dir("tradeshock_report_sums");
    const auto r = run(world, support::unilateral_tariff(world.dims, 0, 0.3), "sums");
    write_scenario_report(dir.path, world, r.result, fixed_options());

    const Table emp = read_table(dir.path / "employment_by_income_group.csv");
    double sum = 0.0;
    for (std::size_t k = 1; k + 1 < emp.size(); ++k) sum += std::stod(emp[k][2]);
    CHECK(emp.back()[0] == "Total");
    CHECK(std::abs(sum - std::stod(emp.back()[2])) <= 0.0005 * (emp.size() - 2));

    const Table labour = read_table(dir.path / "labour_groups.csv");
    REQUIRE(labour.size() == 10);
    for (std::size_t p = 0; p < 4; ++p) {
      const double total = std::stod(labour[1 + 2 * p][3]) + std::stod(labour[2 + 2 * p][3]);
      CHECK(std::abs(total - 100.0) <= 0.011);
    }
    CHECK(labour.back()[1] == "Total losses");

    const Table top = read_table(dir.path / "top_sectors.csv");
    REQUIRE(top.size() == 6);
    CHECK(top[1][2] != top[1][1]);  // sector names resolved
    CHECK(top[4][1] == "Subtotal");
    CHECK(top[5][1] == "Total");
  }

  TEST_CASE("reports are byte-identical without a timestamp") {
    const auto world = support::make_world(6, 3, 2);
    TempDir a("tradeshock_report_a"), b("tradeshock_report_b");
    const auto r = run(world, support::uniform_tariff(world.dims, 0.1), "same");
    write_scenario_report(a.path, world, r.result, fixed_options());
    write_scenario_report(b.path, world, run(world, support::uniform_tariff(world.dims, 0.1), "same").result,
                          fixed_options());
    for (const auto& entry : fs::directory_iterator(a.path)) {
      CAPTURE(entry.path().filename().string());
      CHECK(slurp(entry.path()) == slurp(b.path / entry.path().filename()));
    }
    const std::string header = slurp(a.path / "top_countries.csv");
    CHECK(header.find("# world_hash: " + format_hash(world.fingerprint())) != std::string::npos);
    CHECK(header.find("# generated") == std::string::npos);

    TempDir c("tradeshock_report_c");
    ReportOptions stamped = fixed_options();
    stamped.timestamp = true;
    write_scenario_report(c.path, world, r.result, stamped);
    CHECK(slurp(c.path / "top_countries.csv").find("# generated: ") != std::string::npos);
  }

  TEST_CASE("baseline report") {
    const auto world = support::make_world(7, 3, 2);
    TempDir dir("tradeshock_report_base");
    RunMetadata meta;
    meta.scenario = "baseline";
    meta.params = ModelParameters::defaults(2);
    meta.world_hash = world.fingerprint();
    const auto base = solve_baseline(world);
    write_baseline_report(dir.path, world, base, meta, fixed_options());
    const Table cells = read_table(dir.path / "baseline_cells.csv");
    REQUIRE(cells.size() == 7);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(std::stod(cells[i + 1][2]) == base.output[static_cast<Eigen::Index>(i)]);
    }
    CHECK(fs::exists(dir.path / "baseline_by_income_group.csv"));
    CHECK(fs::exists(dir.path / "summary.json"));
  }

  TEST_CASE("comparing runs") {
    const auto world = support::make_world(8, 3, 2);
    TempDir a("tradeshock_cmp_a"), b("tradeshock_cmp_b"), other("tradeshock_cmp_other");
    write_scenario_report(a.path, world, run(world, support::uniform_tariff(world.dims, 0.1), "low").result,
                          fixed_options());
    write_scenario_report(b.path, world, run(world, support::uniform_tariff(world.dims, 0.2), "high").result,
                          fixed_options());

    const std::string self = compare_runs({a.path, a.path});
    std::istringstream lines(self);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
      if (f[0] == "income_group") {
        CHECK(f[1] == "low_jobs");
        continue;
      }
      ++rows;
      REQUIRE(f.size() >= 5);
      CHECK(f[1] == f[3]);
      CHECK(f[2] == f[4]);
    }
    CHECK(rows == static_cast<int>(world.income_groups.groups().size()) + 1);

    const std::string both = compare_runs({a.path, b.path});
    CHECK(both.find("income_group,low_jobs,low_pct,high_jobs,high_pct") != std::string::npos);
    CHECK(both.find("\nTotal,") != std::string::npos);

    const auto world2 = support::make_world(9, 3, 2);
    write_scenario_report(other.path, world2,
                          run(world2, support::uniform_tariff(world2.dims, 0.1), "x").result,
                          fixed_options());
    CHECK_THROWS_AS(compare_runs({a.path, other.path}), DimensionError);
    CHECK_THROWS_AS(compare_runs({a.path}), Error);
    CHECK_THROWS_AS(compare_runs({a.path, "/nonexistent/run"}), IoError);
  }

  TEST_CASE("shipped scenarios on the demo world give one merged table") {
    const auto world = calibrate(load_world(fs::path(TRADESHOCK_SOURCE_DIR) / "data/demo"));
    const auto& reg = icio_registry();
    const ResolveContext ctx{world.dims,         world.income_groups, reg.country_codes(),
                             reg.sector_codes(), reg.group_names(),   nullptr};
    TempDir root("tradeshock_cmp_demo");
    std::vector<fs::path> dirs;
    for (const auto& s : builtin_scenarios()) {
      const auto resolved = resolve_scenario(s, ctx);
      auto r = run(world, resolved.tariffs, s.name);
      CHECK(r.shocked.converged());
      dirs.push_back(root.path / s.name);
      write_scenario_report(dirs.back(), world, r.result, fixed_options());
    }
    const std::string merged = compare_runs(dirs);
    CHECK(merged.find("scenario1_jobs,scenario1_pct,scenario2_jobs,scenario2_pct,scenario3_jobs,"
                      "scenario3_pct") != std::string::npos);
  }
}
