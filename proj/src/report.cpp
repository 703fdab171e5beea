#include "tradeshock/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "json.hpp"
#include "tradeshock/error.hpp"
#include "tradeshock/registry.hpp"

namespace tradeshock {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_hash(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  // "-0.000" reads as a loss that is not there.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::vector<AggregateRow> exports_by_income_group(const CalibratedWorld& world,
                                                  const DeltaReport& deltas) {
  const IncomeGroups& groups = world.income_groups;
  std::vector<double> base(groups.groups().size(), 0.0), delta(groups.groups().size(), 0.0);
  for (std::size_t c = 0; c < world.dims.countries(); ++c) {
    const auto ec = static_cast<Eigen::Index>(c);
    base[groups.group_index(c)] += deltas.country_exports.baseline[ec];
    delta[groups.group_index(c)] += deltas.country_exports.delta[ec];
  }
  std::vector<AggregateRow> rows;
  for (std::size_t g = 0; g < base.size(); ++g) {
    rows.push_back(make_row(groups.groups()[g], base[g], delta[g]));
  }
  return rows;
}

ScenarioResult analyse(const CalibratedWorld& world, const EquilibriumState& baseline,
                       const EquilibriumState& shocked, RunMetadata meta) {
  ScenarioResult r;
  r.meta = std::move(meta);
  r.deltas = diff_states(baseline, shocked);
  r.employment = employment_delta(world.satellite, world.dims, world.income_groups,
                                  baseline.output, shocked.output);
  r.exports_by_income_group = exports_by_income_group(world, r.deltas);
  r.total_exports = make_row("Total", r.deltas.country_exports.baseline.sum(),
                             r.deltas.country_exports.delta.sum());
  return r;
}

namespace {

std::string describe(const Vector& v) {
  if (v.size() == 0) return "";
  if ((v.array() == v[0]).all()) return csv::format_number(v[0]);
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ";" : "") + csv::format_number(v[i]);
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class TableWriter {
 public:
  TableWriter(const fs::path& path, const RunMetadata& meta, const ReportOptions& options,
              const std::string& title)
      : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path.string());
    out_ << "# " << title << '\n';
    out_ << "# scenario: " << meta.scenario << '\n';
    out_ << "# sigma: " << describe(meta.params.sigma) << '\n';
    out_ << "# epsilon: " << describe(meta.params.epsilon) << '\n';
    out_ << "# damping: " << csv::format_number(meta.solver.damping) << '\n';
    out_ << "# tolerance: " << csv::format_number(meta.solver.tolerance) << '\n';
    out_ << "# iterations: " << meta.iterations << '\n';
    out_ << "# converged: " << (meta.status == SolveStatus::Converged ? "true" : "false") << '\n';
    out_ << "# status: " << to_string(meta.status) << '\n';
    out_ << "# world_hash: " << format_hash(meta.world_hash) << '\n';
    if (options.timestamp) out_ << "# generated: " << utc_now() << '\n';
  }

  TableWriter& row(std::initializer_list<std::string> fields) {
    bool first = true;
    for (const auto& f : fields) {
      out_ << (first ? "" : ",") << f;
      first = false;
    }
    out_ << '\n';
    return *this;
  }

 private:
  std::ofstream out_;
};

std::string abs3(double v) { return format_fixed(v, 3); }
std::string pct2(double v) { return format_fixed(v, 2); }

void aggregate_table(const fs::path& path, const RunMetadata& meta, const ReportOptions& options,
                     const std::string& title, const std::string& key,
                     const std::vector<AggregateRow>& rows, const AggregateRow& total,
                     const std::string& unit) {
  TableWriter w(path, meta, options, title);
  w.row({key, "baseline_" + unit, "delta_" + unit, "pct_change"});
  for (const auto& r : rows) w.row({r.label, abs3(r.baseline), abs3(r.delta), pct2(r.pct)});
  w.row({"Total", abs3(total.baseline), abs3(total.delta), pct2(total.pct)});
}

void ranked_table(const fs::path& path, const RunMetadata& meta, const ReportOptions& options,
                  const std::string& title, const RankedTable& table, bool sector_names) {
  TableWriter w(path, meta, options, title);
  w.row({"rank", "code", "name", "baseline_jobs", "delta_jobs", "pct_change"});
  std::size_t rank = 0;
  for (const auto& r : table.rows) {
    const std::string name = sector_names ? icio_registry().sector_name(r.label) : r.label;
    w.row({std::to_string(++rank), r.label, name, abs3(r.baseline), abs3(r.delta), pct2(r.pct)});
  }
  w.row({"", "Subtotal", "", abs3(table.subtotal.baseline), abs3(table.subtotal.delta),
         pct2(table.subtotal.pct)});
  w.row({"", "Total", "", abs3(table.total.baseline), abs3(table.total.delta),
         pct2(table.total.pct)});
}

json rows_json(const std::vector<AggregateRow>& rows) {
  json list = json::array();
  for (const auto& r : rows) {
    json obj{{"label", r.label}, {"baseline", r.baseline}, {"delta", r.delta}};
    obj["pct"] = std::isnan(r.pct) ? json(nullptr) : json(r.pct);
    list.push_back(std::move(obj));
  }
  return list;
}

json meta_json(const RunMetadata& meta, const CalibratedWorld& world) {
  return json{{"scenario", meta.scenario},
              {"world_hash", format_hash(meta.world_hash)},
              {"countries", world.dims.countries()},
              {"sectors", world.dims.sectors()},
              {"sigma", describe(meta.params.sigma)},
              {"epsilon", describe(meta.params.epsilon)},
              {"damping", meta.solver.damping},
              {"tolerance", meta.solver.tolerance},
              {"iterations", meta.iterations},
              {"status", std::string(to_string(meta.status))},
              {"converged", meta.status == SolveStatus::Converged},
              {"warnings", meta.warnings}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

void write_scenario_report(const fs::path& dir, const CalibratedWorld& world,
                           const ScenarioResult& r, const ReportOptions& options) {
  fs::create_directories(dir);
  const RunMetadata& meta = r.meta;
  const EmploymentReport& emp = r.employment;

  aggregate_table(dir / "employment_by_income_group.csv", meta, options,
                  "Employment impact by income group (thousand jobs, percent change)",
                  "income_group", emp.by_income_group, emp.total, "jobs");
  aggregate_table(dir / "exports_by_income_group.csv", meta, options,
                  "Export impact by income group (value, percent change)", "income_group",
                  r.exports_by_income_group, r.total_exports, "exports");

  const std::size_t k_countries = std::min(options.top_k, world.dims.countries());
  const std::size_t k_sectors = std::min(options.top_k, world.dims.sectors());
  ranked_table(dir / "top_countries.csv", meta, options,
               "Most affected countries by employment (thousand jobs)",
               top_k(emp, RankDimension::Country, k_countries), false);
  ranked_table(dir / "top_sectors.csv", meta, options,
               "Most affected sectors by employment (thousand jobs)",
               top_k(emp, RankDimension::Sector, k_sectors), true);

  {
    TableWriter w(dir / "labour_groups.csv", meta, options,
                  "Distribution of job losses across labour groups (percent of losses)");
    w.row({"partition", "group", "delta_jobs", "share_of_losses_pct"});
    static constexpr const char* kNames[] = {"formality", "skill", "age", "sex"};
    for (std::size_t k = 0; k < emp.group_distribution.size(); ++k) {
      const auto& g = emp.group_distribution[k];
      w.row({kNames[k / 2], g.label, abs3(g.jobs), pct2(g.pct)});
    }
    w.row({"all", "Total losses", abs3(emp.total_losses), emp.total_losses < 0.0 ? "100.00" : "0.00"});
  }

  {
    // Full precision so the cell table reproduces the solver output exactly.
    TableWriter w(dir / "cell_deltas.csv", meta, options,
                  "Changes by country and sector (full precision)");
    w.row({"country", "sector", "output_baseline", "output_delta", "output_pct",
           "exports_baseline", "exports_delta", "exports_pct", "final_demand_baseline",
           "final_demand_delta", "final_demand_pct", "jobs_baseline", "jobs_delta", "jobs_pct"});
    const auto num = [](double v) { return std::isnan(v) ? std::string() : csv::format_number(v); };
    const DeltaReport& d = r.deltas;
    for (std::size_t i = 0; i < world.dims.size(); ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      w.row({world.dims.country_codes()[world.dims.country_of(i)],
             world.dims.sector_codes()[world.dims.sector_of(i)], num(d.output.baseline[e]),
             num(d.output.delta[e]), num(d.output.pct[e]), num(d.exports.baseline[e]),
             num(d.exports.delta[e]), num(d.exports.pct[e]), num(d.final_demand.baseline[e]),
             num(d.final_demand.delta[e]), num(d.final_demand.pct[e]), num(emp.baseline[e]),
             num(emp.delta[e]), num(emp.pct[e])});
    }
  }

  json summary = meta_json(meta, world);
  summary["employment_by_income_group"] = rows_json(emp.by_income_group);
  summary["employment_total"] = rows_json({emp.total}).front();
  summary["exports_by_income_group"] = rows_json(r.exports_by_income_group);
  summary["exports_total"] = rows_json({r.total_exports}).front();
  write_json(dir / "summary.json", summary);
}

void write_baseline_report(const fs::path& dir, const CalibratedWorld& world,
                           const EquilibriumState& baseline, const RunMetadata& meta,
                           const ReportOptions& options) {
  fs::create_directories(dir);
  const Vector jobs = employment_levels(world.satellite, baseline.output);
  const IncomeGroups& groups = world.income_groups;
  const std::size_t g_count = groups.groups().size();
  std::vector<double> g_jobs(g_count, 0.0), g_out(g_count, 0.0), g_exp(g_count, 0.0),
      g_imp(g_count, 0.0);
  const std::size_t n = world.dims.sectors();
  for (std::size_t c = 0; c < world.dims.countries(); ++c) {
    const std::size_t g = groups.group_index(c);
    const auto seg = static_cast<Eigen::Index>(c * n);
    g_jobs[g] += jobs.segment(seg, static_cast<Eigen::Index>(n)).sum();
    g_out[g] += baseline.output.segment(seg, static_cast<Eigen::Index>(n)).sum();
    g_exp[g] += baseline.trade.exports[static_cast<Eigen::Index>(c)];
    g_imp[g] += baseline.trade.imports[static_cast<Eigen::Index>(c)];
  }
  {
    TableWriter w(dir / "baseline_by_income_group.csv", meta, options,
                  "Baseline levels by income group (thousand jobs, values)");
    w.row({"income_group", "jobs", "gross_output", "exports", "imports"});
    for (std::size_t g = 0; g < g_count; ++g) {
      w.row({groups.groups()[g], abs3(g_jobs[g]), abs3(g_out[g]), abs3(g_exp[g]), abs3(g_imp[g])});
    }
    w.row({"Total", abs3(jobs.sum()), abs3(baseline.output.sum()),
           abs3(baseline.trade.exports.sum()), abs3(baseline.trade.imports.sum())});
  }
  {
    TableWriter w(dir / "baseline_cells.csv", meta, options, "Baseline by country and sector");
    w.row({"country", "sector", "gross_output", "final_demand", "exports", "jobs"});
    for (std::size_t i = 0; i < world.dims.size(); ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      w.row({world.dims.country_codes()[world.dims.country_of(i)],
             world.dims.sector_codes()[world.dims.sector_of(i)],
             csv::format_number(baseline.output[e]), csv::format_number(baseline.final_demand[e]),
             csv::format_number(baseline.trade.sector_exports[e]), csv::format_number(jobs[e])});
    }
  }
  json summary = meta_json(meta, world);
  summary["total_jobs"] = jobs.sum();
  summary["total_output"] = baseline.output.sum();
  write_json(dir / "summary.json", summary);
}

std::string compare_runs(const std::vector<fs::path>& run_dirs) {
  if (run_dirs.size() < 2) throw ScenarioError("compare needs at least two runs");
  std::vector<json> runs;
  for (const auto& dir : run_dirs) {
    const fs::path path = dir / "summary.json";
    if (!fs::is_regular_file(path)) throw IoError("no summary.json in " + dir.string());
    try {
      runs.push_back(json::parse(csv::read_text(path)));
    } catch (const json::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
    if (!runs.back().contains("employment_by_income_group")) {
      throw IoError(path.string() + " is not a scenario run");
    }
  }
  const json& first = runs.front();
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].at("countries") != first.at("countries") ||
        runs[k].at("sectors") != first.at("sectors")) {
      throw DimensionError("cannot compare " + run_dirs[k].string() + " with " +
                           run_dirs[0].string() + ": world dimensions differ");
    }
    if (runs[k].at("world_hash") != first.at("world_hash")) {
      throw DimensionError("cannot compare " + run_dirs[k].string() + " with " +
                           run_dirs[0].string() + ": runs use different world data (hash " +
                           runs[k].at("world_hash").get<std::string>() + " vs " +
                           first.at("world_hash").get<std::string>() + ")");
    }
  }

  const auto cell = [](const json& row, const char* key, int decimals) {
    return row.at(key).is_null() ? std::string() : format_fixed(row.at(key).get<double>(), decimals);
  };
  std::ostringstream out;
  out << "# Employment impact by income group across runs (thousand jobs, percent change)\n";
  out << "# world_hash: " << first.at("world_hash").get<std::string>() << '\n';
  out << "income_group";
  for (const auto& run : runs) {
    const std::string name = run.at("scenario").get<std::string>();
    out << ',' << name << "_jobs," << name << "_pct";
  }
  out << '\n';
  const json& labels = first.at("employment_by_income_group");
  for (std::size_t g = 0; g <= labels.size(); ++g) {
    const bool total = g == labels.size();
    out << (total ? std::string("Total") : labels[g].at("label").get<std::string>());
    for (const auto& run : runs) {
      const json& row =
          total ? run.at("employment_total") : run.at("employment_by_income_group").at(g);
      out << ',' << cell(row, "delta", 3) << ',' << cell(row, "pct", 2);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace tradeshock
