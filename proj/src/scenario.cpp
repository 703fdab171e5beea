#include "tradeshock/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "builtin_data.hpp"
#include "csv.hpp"
#include "json.hpp"
#include "tradeshock/error.hpp"

namespace tradeshock {

using nlohmann::json;

bool Selector::is_wildcard() const {
  return std::find(items.begin(), items.end(), "*") != items.end();
}

int Selector::specificity() const {
  if (is_wildcard()) return 0;
  const bool any_code = std::any_of(items.begin(), items.end(),
                                    [](const std::string& s) { return s.front() != '@'; });
  return any_code ? 2 : 1;
}

std::vector<std::string> Selector::canonical() const {
  if (is_wildcard()) return {"*"};
  std::vector<std::string> out = items;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view to_string(TariffMode mode) noexcept {
  switch (mode) {
    case TariffMode::Set: return "set";
    case TariffMode::Add: return "add";
    case TariffMode::Scale: return "scale";
  }
  return "?";
}

Vector ElasticitySpec::resolve(const WorldDims& dims, const Vector& fallback) const {
  Vector out = fallback;
  if (uniform) out.setConstant(*uniform);
  for (const auto& [code, value] : by_sector) {
    const auto s = dims.find_sector(code);
    if (!s) throw ScenarioError("elasticity override names unknown sector '" + code + "'");
    out[static_cast<Eigen::Index>(*s)] = value;
  }
  return out;
}

// ---------------------------------------------------------------- parsing

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(where, "unknown key '" + key + "'");
    }
  }
}

double number_at(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + "." + key, "must be finite");
  return d;
}

Selector parse_selector(const json& v, const std::string& where, bool allow_groups) {
  Selector sel;
  if (v.is_string()) {
    sel.items.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const auto& item : v) {
      if (!item.is_string()) fail(where, "selector items must be strings");
      sel.items.push_back(item.get<std::string>());
    }
  } else {
    fail(where, "selector must be a string or a list of strings");
  }
  if (sel.items.empty()) fail(where, "selector is empty");
  for (const auto& item : sel.items) {
    if (item.empty()) fail(where, "empty code in selector");
    if (item.front() == '@' && (!allow_groups || item.size() == 1)) {
      fail(where, "group selector '" + item + "' not allowed here");
    }
  }
  return sel;
}

TariffEntry parse_entry(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "entry must be an object");
  check_keys(v, {"importer", "exporter", "commodities", "rate", "factor", "mode", "note"}, where);
  TariffEntry e;
  e.location = where;
  if (!v.contains("importer")) fail(where, "missing 'importer'");
  if (!v.contains("exporter")) fail(where, "missing 'exporter'");
  e.importers = parse_selector(v.at("importer"), where + ".importer", true);
  e.exporters = parse_selector(v.at("exporter"), where + ".exporter", true);
  if (v.contains("commodities")) {
    e.commodities = parse_selector(v.at("commodities"), where + ".commodities", false);
  }
  if (v.contains("note")) {
    if (!v.at("note").is_string()) fail(where + ".note", "expected a string");
    e.note = v.at("note").get<std::string>();
  }
  if (v.contains("mode") && !v.at("mode").is_string()) fail(where + ".mode", "expected a string");
  const std::string mode = v.contains("mode") ? v.at("mode").get<std::string>() : "set";
  if (mode == "set" || mode == "add") {
    e.mode = mode == "set" ? TariffMode::Set : TariffMode::Add;
    if (!v.contains("rate")) fail(where, "'" + mode + "' entries need a 'rate'");
    if (v.contains("factor")) fail(where, "'factor' only applies to 'scale' entries");
    e.rate = number_at(v, "rate", where);
    if (e.rate < 0.0) fail(where + ".rate", "negative rate " + csv::format_number(e.rate));
  } else if (mode == "scale") {
    e.mode = TariffMode::Scale;
    if (!v.contains("factor")) fail(where, "'scale' entries need a 'factor'");
    if (v.contains("rate")) fail(where, "'rate' does not apply to 'scale' entries");
    e.factor = number_at(v, "factor", where);
    if (e.factor < 0.0) fail(where + ".factor", "negative factor");
  } else {
    fail(where + ".mode", "unknown mode '" + mode + "' (expected set, add or scale)");
  }
  return e;
}

TariffSchedule parse_schedule(const json& root, const char* key, const std::string& source) {
  TariffSchedule schedule;
  if (!root.contains(key)) return schedule;
  const json& list = root.at(key);
  if (!list.is_array()) fail(source + ": " + key, "expected a list");
  for (std::size_t i = 0; i < list.size(); ++i) {
    schedule.entries.push_back(
        parse_entry(list[i], source + ": " + key + "[" + std::to_string(i) + "]"));
  }
  return schedule;
}

ElasticitySpec parse_elasticity(const json& v, const std::string& where) {
  ElasticitySpec spec;
  if (v.is_number()) {
    spec.uniform = v.get<double>();
  } else if (v.is_object()) {
    for (const auto& [key, value] : v.items()) {
      if (!value.is_number()) fail(where + "." + key, "expected a number");
      if (key == "*") {
        spec.uniform = value.get<double>();
      } else {
        spec.by_sector[key] = value.get<double>();
      }
    }
  } else {
    fail(where, "expected a number or an object of per-sector numbers");
  }
  return spec;
}

json selector_json(const Selector& sel) {
  if (sel.items.size() == 1) return sel.items.front();
  return sel.items;
}

json elasticity_json(const ElasticitySpec& spec) {
  if (spec.by_sector.empty() && spec.uniform) return *spec.uniform;
  json obj = json::object();
  if (spec.uniform) obj["*"] = *spec.uniform;
  for (const auto& [k, v] : spec.by_sector) obj[k] = v;
  return obj;
}

json schedule_json(const TariffSchedule& schedule) {
  json list = json::array();
  for (const auto& e : schedule.entries) {
    json obj;
    obj["importer"] = selector_json(e.importers);
    obj["exporter"] = selector_json(e.exporters);
    if (!e.commodities.is_wildcard()) obj["commodities"] = e.commodities.items;
    obj["mode"] = std::string(to_string(e.mode));
    if (e.mode == TariffMode::Scale) {
      obj["factor"] = e.factor;
    } else {
      obj["rate"] = e.rate;
    }
    if (!e.note.empty()) obj["note"] = e.note;
    list.push_back(std::move(obj));
  }
  return list;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text, const std::string& source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError(source + ": " + e.what());
  }
  if (!root.is_object()) fail(source, "scenario must be a JSON object");
  check_keys(root, {"name", "description", "shocks", "retaliation", "overrides"}, source);

  Scenario s;
  if (!root.contains("name") || !root.at("name").is_string() ||
      root.at("name").get<std::string>().empty()) {
    fail(source, "scenario needs a non-empty 'name'");
  }
  s.name = root.at("name").get<std::string>();
  if (root.contains("description")) {
    if (!root.at("description").is_string()) fail(source + ": description", "expected a string");
    s.description = root.at("description").get<std::string>();
  }
  s.shocks = parse_schedule(root, "shocks", source);
  s.retaliation = parse_schedule(root, "retaliation", source);

  if (root.contains("overrides")) {
    const json& o = root.at("overrides");
    const std::string where = source + ": overrides";
    if (!o.is_object()) fail(where, "expected an object");
    check_keys(o, {"sigma", "epsilon", "damping"}, where);
    if (o.contains("sigma")) s.overrides.sigma = parse_elasticity(o.at("sigma"), where + ".sigma");
    if (o.contains("epsilon")) {
      s.overrides.epsilon = parse_elasticity(o.at("epsilon"), where + ".epsilon");
    }
    if (o.contains("damping")) {
      const double d = number_at(o, "damping", where);
      if (!(d > 0.0 && d <= 1.0)) fail(where + ".damping", "must lie in (0, 1]");
      s.overrides.damping = d;
    }
  }
  return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  return parse_scenario_text(csv::read_text(path), path.filename().string());
}

std::string serialize_scenario(const Scenario& s) {
  json root;
  root["name"] = s.name;
  if (!s.description.empty()) root["description"] = s.description;
  root["shocks"] = schedule_json(s.shocks);
  root["retaliation"] = schedule_json(s.retaliation);
  json overrides = json::object();
  if (s.overrides.sigma) overrides["sigma"] = elasticity_json(*s.overrides.sigma);
  if (s.overrides.epsilon) overrides["epsilon"] = elasticity_json(*s.overrides.epsilon);
  if (s.overrides.damping) overrides["damping"] = *s.overrides.damping;
  if (!overrides.empty()) root["overrides"] = std::move(overrides);
  return root.dump(2) + "\n";
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < detail::kScenarioJson.size(); ++i) {
    out.push_back(parse_scenario_text(detail::kScenarioJson[i],
                                      "scenario" + std::to_string(i + 1) + ".json"));
  }
  return out;
}

// ---------------------------------------------------------- baseline duties

BaselineDuties::BaselineDuties(const WorldDims& dims) : rates_(dims) {}

void BaselineDuties::set(std::size_t importer, std::size_t exporter, std::size_t commodity,
                         double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ScenarioError("baseline duty " + csv::format_number(rate) + " outside [0, 1)");
  }
  if (importer == exporter) return;
  rates_.set(importer, exporter, commodity, rate);
}

BaselineDuties BaselineDuties::load(const std::filesystem::path& path, const WorldDims& dims) {
  const csv::Table table = csv::read(path);
  const std::vector<std::string> expected = {"importer", "exporter", "sector", "rate"};
  if (table.header != expected) {
    throw ScenarioError(path.string() + ": header must be importer,exporter,sector,rate");
  }
  BaselineDuties duties(dims);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    if (row.size() != 4) throw ScenarioError(where + ": expected 4 fields");
    const auto rate = csv::parse_number(row[3]);
    if (!rate) throw ScenarioError(where + ": rate is not a number");
    const auto importer = dims.find_country(row[0]);
    if (!importer) continue;
    for (std::size_t o = 0; o < dims.countries(); ++o) {
      if (row[1] != "*" && dims.country_codes()[o] != row[1]) continue;
      for (std::size_t y = 0; y < dims.sectors(); ++y) {
        if (row[2] != "*" && dims.sector_codes()[y] != row[2]) continue;
        duties.set(*importer, o, y, *rate);
      }
    }
  }
  return duties;
}

// --------------------------------------------------------------- resolution

namespace {

struct Expander {
  const ResolveContext& ctx;
  std::size_t skipped_codes = 0;

  std::vector<std::size_t> countries(const Selector& sel, const std::string& where) {
    std::vector<bool> mask(ctx.dims.countries(), false);
    for (const auto& item : sel.items) {
      if (item == "*") {
        std::fill(mask.begin(), mask.end(), true);
      } else if (item.front() == '@') {
        const std::string group = item.substr(1);
        if (!ctx.groups.has_group(group) && !ctx.known_groups.contains(group)) {
          fail(where, "unknown income group '" + group + "'");
        }
        for (std::size_t c = 0; c < ctx.dims.countries(); ++c) {
          if (ctx.groups.group_of(c) == group) mask[c] = true;
        }
      } else if (const auto c = ctx.dims.find_country(item)) {
        mask[*c] = true;
      } else if (ctx.known_countries.contains(item)) {
        ++skipped_codes;
      } else {
        fail(where, "unknown country code '" + item + "'");
      }
    }
    return indices(mask);
  }

  std::vector<std::size_t> sectors(const Selector& sel, const std::string& where) {
    std::vector<bool> mask(ctx.dims.sectors(), false);
    for (const auto& item : sel.items) {
      if (item == "*") {
        std::fill(mask.begin(), mask.end(), true);
      } else if (const auto s = ctx.dims.find_sector(item)) {
        mask[*s] = true;
      } else if (ctx.known_sectors.contains(item)) {
        ++skipped_codes;
      } else {
        fail(where, "unknown sector code '" + item + "'");
      }
    }
    return indices(mask);
  }

  static std::vector<std::size_t> indices(const std::vector<bool>& mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) out.push_back(i);
    }
    return out;
  }
};

struct Scope {
  std::vector<std::size_t> importers, exporters, commodities;
};

int precedence(const TariffEntry& e) {
  return e.commodities.specificity() * 9 + e.exporters.specificity() * 3 +
         e.importers.specificity();
}

bool same_scope(const TariffEntry& a, const TariffEntry& b) {
  return a.importers.canonical() == b.importers.canonical() &&
         a.exporters.canonical() == b.exporters.canonical() &&
         a.commodities.canonical() == b.commodities.canonical();
}

}  // namespace

namespace {

struct ResolveNotes {
  bool scale_without_duties = false;
  std::size_t skipped_codes = 0;

  void emit(std::vector<std::string>& warnings) const {
    if (skipped_codes > 0) {
      warnings.push_back(std::to_string(skipped_codes) +
                         " code(s) named by the scenario are not part of this world and were "
                         "skipped");
    }
    if (scale_without_duties) {
      warnings.push_back("scale entries need baseline duties; none were supplied, so they "
                         "resolve to zero");
    }
  }
};

TariffTensor resolve_impl(const TariffSchedule& schedule, const ResolveContext& ctx,
                          ResolveNotes& notes) {
  const std::size_t big_n = ctx.dims.countries();
  const std::size_t n = ctx.dims.sectors();
  if (ctx.groups.countries() != big_n) {
    throw DimensionError("resolve: income groups do not match the world dims");
  }

  Expander expand{ctx};
  std::vector<Scope> scopes;
  scopes.reserve(schedule.entries.size());
  for (const auto& e : schedule.entries) {
    scopes.push_back({expand.countries(e.importers, e.location + ".importer"),
                      expand.countries(e.exporters, e.location + ".exporter"),
                      expand.sectors(e.commodities, e.location + ".commodities")});
  }
  notes.skipped_codes += expand.skipped_codes;

  const auto cell = [&](std::size_t d, std::size_t o, std::size_t y) {
    return (d * big_n + o) * n + y;
  };
  std::vector<double> set_rate(big_n * big_n * n, 0.0);
  std::vector<int> setter(big_n * big_n * n, -1);
  std::vector<double> stacked(big_n * big_n * n, 0.0);

  std::vector<std::size_t> order(schedule.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return precedence(schedule.entries[a]) < precedence(schedule.entries[b]);
  });

  for (std::size_t idx : order) {
    const TariffEntry& e = schedule.entries[idx];
    const Scope& scope = scopes[idx];
    const int key = precedence(e);
    for (std::size_t d : scope.importers) {
      for (std::size_t o : scope.exporters) {
        if (d == o) continue;
        for (std::size_t y : scope.commodities) {
          const std::size_t c = cell(d, o, y);
          switch (e.mode) {
            case TariffMode::Set: {
              const int prev = setter[c];
              if (prev >= 0 && precedence(schedule.entries[static_cast<std::size_t>(prev)]) == key &&
                  !same_scope(schedule.entries[static_cast<std::size_t>(prev)], e) &&
                  set_rate[c] != e.rate) {
                fail(e.location, "contradicts " +
                                     schedule.entries[static_cast<std::size_t>(prev)].location +
                                     " at equal precedence for importer " +
                                     ctx.dims.country_codes()[d] + ", exporter " +
                                     ctx.dims.country_codes()[o] + ", sector " +
                                     ctx.dims.sector_codes()[y]);
              }
              setter[c] = static_cast<int>(idx);
              set_rate[c] = e.rate;
              break;
            }
            case TariffMode::Add:
              stacked[c] += e.rate;
              break;
            case TariffMode::Scale:
              if (ctx.baseline_duties) {
                stacked[c] += (e.factor - 1.0) * ctx.baseline_duties->at(d, o, y);
              } else {
                notes.scale_without_duties = true;
              }
              break;
          }
        }
      }
    }
  }

  TariffTensor out(ctx.dims);
  for (std::size_t d = 0; d < big_n; ++d) {
    for (std::size_t o = 0; o < big_n; ++o) {
      if (d == o) continue;
      for (std::size_t y = 0; y < n; ++y) {
        const std::size_t c = cell(d, o, y);
        const double floor = ctx.baseline_duties ? -ctx.baseline_duties->at(d, o, y) : 0.0;
        out.set(d, o, y, std::max(set_rate[c] + stacked[c], floor));
      }
    }
  }
  return out;
}

}  // namespace

TariffTensor resolve_schedule(const TariffSchedule& schedule, const ResolveContext& ctx,
                              std::vector<std::string>& warnings) {
  ResolveNotes notes;
  TariffTensor out = resolve_impl(schedule, ctx, notes);
  notes.emit(warnings);
  return out;
}

ResolvedScenario resolve_scenario(const Scenario& scenario, const ResolveContext& ctx) {
  ResolvedScenario out{scenario.name, TariffTensor(ctx.dims), {}};
  ResolveNotes notes;
  out.tariffs = resolve_impl(scenario.shocks, ctx, notes);
  const TariffTensor retaliation = resolve_impl(scenario.retaliation, ctx, notes);
  notes.emit(out.warnings);
  for (std::size_t d = 0; d < ctx.dims.countries(); ++d) {
    for (std::size_t o = 0; o < ctx.dims.countries(); ++o) {
      if (d == o) continue;
      for (std::size_t y = 0; y < ctx.dims.sectors(); ++y) {
        const double floor = ctx.baseline_duties ? -ctx.baseline_duties->at(d, o, y) : 0.0;
        out.tariffs.set(d, o, y, std::max(out.tariffs.at(d, o, y) + retaliation.at(d, o, y), floor));
      }
    }
  }
  return out;
}

}  // namespace tradeshock
