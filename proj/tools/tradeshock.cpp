// tradeshock: validate world tables, run tariff scenarios, compare runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tradeshock/data_io.hpp"
#include "tradeshock/equilibrium.hpp"
#include "tradeshock/registry.hpp"
#include "tradeshock/report.hpp"
#include "tradeshock/scenario.hpp"

namespace fs = std::filesystem;
using namespace tradeshock;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;  // invalid data or scenario, no convergence
constexpr int kUsage = 2;    // I/O or command-line problems

struct Options {
  std::string world;
  std::vector<std::string> scenarios;
  std::string out;
  std::optional<double> sigma;
  std::optional<double> epsilon;
  double damping = 0.5;
  double tolerance = 1e-9;
  int max_iter = 200;
  std::size_t top_k = 15;
  bool no_timestamp = false;
  std::string config;
  std::string baseline_duties;

  // fixture
  std::uint64_t seed = 1;
  std::size_t countries = 3;
  std::size_t sectors = 2;
  double sparsity = 0.2;
  double openness = 0.3;
  std::vector<std::string> country_codes;
  std::vector<std::string> sector_codes;

  // compare
  std::vector<std::string> runs;
};

/// Values from the config file replace command-line values.
void apply_config(Options& o) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw IoError("cannot open config " + o.config);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(o.config + ": " + e.what());
  }
  for (const auto& [key, v] : j.items()) {
    if (key == "world") o.world = v.get<std::string>();
    else if (key == "out") o.out = v.get<std::string>();
    else if (key == "scenarios") o.scenarios = v.get<std::vector<std::string>>();
    else if (key == "sigma") o.sigma = v.get<double>();
    else if (key == "epsilon") o.epsilon = v.get<double>();
    else if (key == "damping") o.damping = v.get<double>();
    else if (key == "tol") o.tolerance = v.get<double>();
    else if (key == "max_iter") o.max_iter = v.get<int>();
    else if (key == "top_k") o.top_k = v.get<std::size_t>();
    else if (key == "no_timestamp") o.no_timestamp = v.get<bool>();
    else if (key == "baseline_duties") o.baseline_duties = v.get<std::string>();
    else throw IoError(o.config + ": unknown key '" + key + "'");
  }
}

void print_diagnostics(const std::vector<Diagnostic>& diags) {
  std::cout << "check,file,row,column,expected,actual,message\n";
  for (const auto& d : diags) {
    std::string msg = d.message;
    for (auto& ch : msg) {
      if (ch == ',') ch = ';';
    }
    std::cout << d.check << ',' << d.file << ',' << d.row << ',' << d.column << ','
              << d.expected << ',' << d.actual << ',' << msg << '\n';
  }
}

CalibratedWorld load_calibrated(const Options& o) {
  if (o.world.empty()) throw CLI::RequiredError("--world");
  return calibrate(load_world(o.world));
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.tolerance = o.tolerance;
  cfg.max_iterations = o.max_iter;
  cfg.damping = o.damping;
  cfg.validate();
  return cfg;
}

ModelParameters base_parameters(const Options& o, std::size_t sectors) {
  ModelParameters p = ModelParameters::defaults(sectors);
  if (o.sigma) p.sigma.setConstant(*o.sigma);
  if (o.epsilon) p.epsilon.setConstant(*o.epsilon);
  return p;
}

Scenario load_scenario(const std::string& spec) {
  // "builtin:1" .. "builtin:3" name the shipped scenarios.
  if (spec.rfind("builtin:", 0) == 0) {
    const auto all = builtin_scenarios();
    const std::string idx = spec.substr(8);
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (idx == std::to_string(k + 1) || idx == all[k].name) return all[k];
    }
    throw ScenarioError("no built-in scenario '" + idx + "'");
  }
  return parse_scenario(spec);
}

ReportOptions report_options(const Options& o) { return {o.top_k, !o.no_timestamp}; }

int cmd_validate(const Options& o) {
  if (o.world.empty()) throw CLI::RequiredError("--world");
  try {
    const WorldDataset ds = load_world(o.world);
    std::cout << "ok," << ds.dims.countries() << " countries," << ds.dims.sectors()
              << " sectors\n";
    return kOk;
  } catch (const DataError& e) {
    print_diagnostics(e.diagnostics());
    return kFailure;
  }
}

int cmd_fixture(const Options& o) {
  if (o.out.empty()) throw CLI::RequiredError("--out");
  FixtureOptions fo;
  fo.seed = o.seed;
  fo.countries = o.country_codes.empty() ? o.countries : o.country_codes.size();
  fo.sectors = o.sector_codes.empty() ? o.sectors : o.sector_codes.size();
  fo.sparsity = o.sparsity;
  fo.trade_openness = o.openness;
  if (!o.country_codes.empty()) fo.country_codes = o.country_codes;
  if (!o.sector_codes.empty()) fo.sector_codes = o.sector_codes;
  const Fixture f = generate_fixture(fo);
  write_world(f.dataset, o.out);
  std::cout << "wrote " << f.dataset.dims.countries() << "x" << f.dataset.dims.sectors()
            << " world to " << o.out << " (total employment " << f.total_employment
            << " thousand jobs)\n";
  return kOk;
}

int cmd_baseline(const Options& o) {
  if (o.out.empty()) throw CLI::RequiredError("--out");
  const CalibratedWorld world = load_calibrated(o);
  SolverConfig cfg = solver_config(o);
  const EquilibriumState base = solve_baseline(world, cfg);
  RunMetadata meta{"baseline", base_parameters(o, world.dims.sectors()), cfg, base.iterations,
                   base.status, world.fingerprint(), {}};
  write_baseline_report(o.out, world, base, meta, report_options(o));
  std::cerr << "baseline: " << to_string(base.status) << " after " << base.iterations
            << " iteration(s)\n";
  return base.converged() ? kOk : kFailure;
}

int cmd_run(const Options& o) {
  if (o.out.empty()) throw CLI::RequiredError("--out");
  if (o.scenarios.empty()) throw CLI::RequiredError("--scenario");
  const CalibratedWorld world = load_calibrated(o);
  const SolverConfig base_cfg = solver_config(o);
  const EquilibriumState base = solve_baseline(world, base_cfg);
  if (!base.converged()) {
    std::cerr << "baseline did not converge\n";
    return kFailure;
  }

  const CodeRegistry& registry = icio_registry();
  std::set<std::string> groups = registry.group_names();
  for (const auto& g : world.income_groups.groups()) groups.insert(g);
  std::optional<BaselineDuties> duties;
  if (!o.baseline_duties.empty()) duties = BaselineDuties::load(o.baseline_duties, world.dims);
  const ResolveContext ctx{world.dims,
                           world.income_groups,
                           registry.country_codes(),
                           registry.sector_codes(),
                           groups,
                           duties ? &*duties : nullptr};
  const std::uint64_t hash = world.fingerprint();

  int status = kOk;
  for (const auto& spec : o.scenarios) {
    const Scenario scenario = load_scenario(spec);
    const ResolvedScenario resolved = resolve_scenario(scenario, ctx);
    for (const auto& w : resolved.warnings) std::cerr << scenario.name << ": warning: " << w << '\n';

    ModelParameters params = base_parameters(o, world.dims.sectors());
    if (scenario.overrides.sigma) {
      params.sigma = scenario.overrides.sigma->resolve(world.dims, params.sigma);
    }
    if (scenario.overrides.epsilon) {
      params.epsilon = scenario.overrides.epsilon->resolve(world.dims, params.epsilon);
    }
    params.validate(world.dims.sectors());
    SolverConfig cfg = base_cfg;
    if (scenario.overrides.damping) cfg.damping = *scenario.overrides.damping;

    const EquilibriumState shocked = solve_scenario(world, resolved.tariffs, params, cfg, &base);
    RunMetadata meta{scenario.name, params,           cfg, shocked.iterations,
                     shocked.status, hash, resolved.warnings};
    const ScenarioResult result = analyse(world, base, shocked, std::move(meta));
    write_scenario_report(fs::path(o.out) / scenario.name, world, result, report_options(o));
    std::cerr << scenario.name << ": " << to_string(shocked.status) << " after "
              << shocked.iterations << " iteration(s), employment change "
              << format_fixed(result.employment.total.delta, 3) << " thousand jobs ("
              << format_fixed(result.employment.total.pct, 2) << "%)\n";
    if (!shocked.converged()) status = kFailure;
  }
  return status;
}

int cmd_compare(const Options& o) {
  std::vector<fs::path> dirs(o.runs.begin(), o.runs.end());
  const std::string table = compare_runs(dirs);
  if (o.out.empty()) {
    std::cout << table;
  } else {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw IoError("cannot write " + o.out);
    out << table;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tariff shock simulation on multiregional input-output tables"};
  app.require_subcommand(1);
  Options o;

  const auto add_world = [&](CLI::App* cmd) {
    cmd->add_option("--world", o.world, "World directory (dims.csv, Z.csv, fd.csv, ...)");
  };
  const auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--sigma", o.sigma, "Armington elasticity for every commodity (default 4)");
    cmd->add_option("--epsilon", o.epsilon, "Final demand price elasticity (default -0.5)");
    cmd->add_option("--damping", o.damping, "Weight on the new iterate, in (0, 1]");
    cmd->add_option("--tol", o.tolerance, "Convergence tolerance on relative changes");
    cmd->add_option("--max-iter", o.max_iter, "Iteration limit");
    cmd->add_option("--top-k", o.top_k, "Rows in the top country and sector tables");
    cmd->add_flag("--no-timestamp", o.no_timestamp, "Omit the generation time from reports");
    cmd->add_option("--config", o.config, "JSON file whose values replace these flags");
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a world directory");
  add_world(validate_cmd);

  auto* fixture_cmd = app.add_subcommand("fixture", "Write a balanced synthetic world");
  fixture_cmd->add_option("--out", o.out, "Output directory")->required();
  fixture_cmd->add_option("--seed", o.seed, "Random seed");
  fixture_cmd->add_option("--countries", o.countries, "Number of countries");
  fixture_cmd->add_option("--sectors", o.sectors, "Number of sectors");
  fixture_cmd->add_option("--sparsity", o.sparsity, "Share of foreign links dropped, [0, 1)");
  fixture_cmd->add_option("--openness", o.openness, "Trade openness, [0, 1]");
  fixture_cmd->add_option("--country-codes", o.country_codes, "Country codes")->delimiter(',');
  fixture_cmd->add_option("--sector-codes", o.sector_codes, "Sector codes")->delimiter(',');

  auto* baseline_cmd = app.add_subcommand("baseline", "Solve and report the calibrated baseline");
  add_world(baseline_cmd);
  baseline_cmd->add_option("--out", o.out, "Report directory");
  add_solver(baseline_cmd);

  auto* run_cmd = app.add_subcommand("run", "Run tariff scenarios against the baseline");
  add_world(run_cmd);
  run_cmd->add_option("--scenario", o.scenarios,
                      "Scenario JSON file, or builtin:1..3 (repeatable)");
  run_cmd->add_option("--out", o.out, "Report directory (one subdirectory per scenario)");
  run_cmd->add_option("--baseline-duties", o.baseline_duties,
                      "CSV of existing duties (importer,exporter,sector,rate) for scale entries");
  add_solver(run_cmd);

  auto* compare_cmd = app.add_subcommand("compare", "Merge completed runs into one table");
  compare_cmd->add_option("runs", o.runs, "Scenario report directories")->required()->expected(2, -1);
  compare_cmd->add_option("--out", o.out, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    apply_config(o);
    if (validate_cmd->parsed()) return cmd_validate(o);
    if (fixture_cmd->parsed()) return cmd_fixture(o);
    if (baseline_cmd->parsed()) return cmd_baseline(o);
    if (run_cmd->parsed()) return cmd_run(o);
    if (compare_cmd->parsed()) return cmd_compare(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << " is required\n";
    return kUsage;
  } catch (const DataError& e) {
    print_diagnostics(e.diagnostics());
    return kFailure;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
