#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tradeshock/block_matrix.hpp"
#include "tradeshock/income_groups.hpp"
#include "tradeshock/tariff.hpp"
#include "tradeshock/world_dims.hpp"

namespace tradeshock {

/// A set of countries or sectors. Items are "*" (everything), a code, or,
/// for countries, "@<income group>".
struct Selector {
  std::vector<std::string> items;

  static Selector all() { return {{"*"}}; }
  bool is_wildcard() const;
  /// 0 = wildcard, 1 = income groups only, 2 = explicit codes present.
  int specificity() const;
  /// Sorted, de-duplicated items; equal canonical forms mean equal scope.
  std::vector<std::string> canonical() const;
};

enum class TariffMode {
  Set,    // the cell's rate, highest precedence wins
  Add,    // stacked on top of whatever is set
  Scale,  // rate change of (factor - 1) * baseline duty
};

std::string_view to_string(TariffMode mode) noexcept;

struct TariffEntry {
  Selector importers = Selector::all();
  Selector exporters = Selector::all();
  Selector commodities = Selector::all();
  TariffMode mode = TariffMode::Set;
  double rate = 0.0;    // Set / Add: ad-valorem fraction, >= 0
  double factor = 1.0;  // Scale: multiplier on the baseline duty, >= 0
  std::string note;
  std::string location;  // e.g. "scenario1.json: shocks[3]"
};

struct TariffSchedule {
  std::vector<TariffEntry> entries;
};

/// Elasticity override: an optional uniform value plus per-sector values.
struct ElasticitySpec {
  std::optional<double> uniform;
  std::map<std::string, double> by_sector;

  /// Starts from `fallback`, applies uniform, then by_sector. Unknown sector
  /// codes throw ScenarioError.
  Vector resolve(const WorldDims& dims, const Vector& fallback) const;
};

struct ScenarioOverrides {
  std::optional<ElasticitySpec> sigma;
  std::optional<ElasticitySpec> epsilon;
  std::optional<double> damping;
};

struct Scenario {
  std::string name;
  std::string description;
  TariffSchedule shocks;       // tariffs of the initiating country
  TariffSchedule retaliation;  // partners' responses
  ScenarioOverrides overrides;
};

/// Parses a scenario file (JSON). Syntax errors, negative rates, unknown
/// keys and invalid modes throw ScenarioError naming the entry location.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text, const std::string& source = "<memory>");

/// Canonical JSON text; parse_scenario_text(serialize_scenario(s)) == s semantically.
std::string serialize_scenario(const Scenario& scenario);

/// The three shipped scenarios (escalation, updated tariffs with
/// retaliation, partial de-escalation), compiled into the library.
std::vector<Scenario> builtin_scenarios();

/// Pre-existing duty rates by (importer, exporter, commodity), used by
/// Scale entries. Rates lie in [0, 1).
class BaselineDuties {
 public:
  explicit BaselineDuties(const WorldDims& dims);

  /// CSV with header "importer,exporter,sector,rate". "*" is allowed for
  /// exporter and sector; codes absent from the world are skipped.
  static BaselineDuties load(const std::filesystem::path& path, const WorldDims& dims);

  double at(std::size_t importer, std::size_t exporter, std::size_t commodity) const {
    return rates_.at(importer, exporter, commodity);
  }
  void set(std::size_t importer, std::size_t exporter, std::size_t commodity, double rate);

 private:
  TariffTensor rates_;
};

/// Everything resolution needs besides the schedule itself.
struct ResolveContext {
  const WorldDims& dims;
  const IncomeGroups& groups;
  /// Codes accepted but absent from this world; entries naming them are
  /// skipped. Anything neither here nor in the world is rejected.
  std::set<std::string> known_countries;
  std::set<std::string> known_sectors;
  std::set<std::string> known_groups;
  const BaselineDuties* baseline_duties = nullptr;
};

/// Resolves a schedule into a dense tensor.
///
/// Precedence for Set entries: the more specific commodity selector wins,
/// then the more specific exporter selector, then the more specific importer
/// selector (explicit codes > income groups > "*"). Among Set entries of
/// equal precedence, a later entry with the identical scope replaces an
/// earlier one; overlapping entries of different scope and different rate
/// are rejected. Add and Scale contributions are summed on top. Domestic
/// cells stay zero and the result never goes below minus the baseline duty.
TariffTensor resolve_schedule(const TariffSchedule& schedule, const ResolveContext& context,
                              std::vector<std::string>& warnings);

struct ResolvedScenario {
  std::string name;
  TariffTensor tariffs;  // shocks + retaliation
  std::vector<std::string> warnings;
};

ResolvedScenario resolve_scenario(const Scenario& scenario, const ResolveContext& context);

}  // namespace tradeshock
