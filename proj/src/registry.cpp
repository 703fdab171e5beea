#include "tradeshock/registry.hpp"

#include "builtin_data.hpp"
#include "csv.hpp"
#include "tradeshock/error.hpp"

namespace tradeshock {

std::map<std::string, std::string> CodeRegistry::income_mapping() const {
  std::map<std::string, std::string> out;
  for (const auto& r : regions) out.emplace(r.code, r.income_group);
  return out;
}

std::set<std::string> CodeRegistry::country_codes() const {
  std::set<std::string> out;
  for (const auto& r : regions) out.insert(r.code);
  return out;
}

std::set<std::string> CodeRegistry::sector_codes() const {
  std::set<std::string> out;
  for (const auto& s : sectors) out.insert(s.code);
  return out;
}

std::set<std::string> CodeRegistry::group_names() const {
  std::set<std::string> out;
  for (const auto& r : regions) out.insert(r.income_group);
  return out;
}

WorldDims CodeRegistry::dims() const {
  std::vector<std::string> countries, sector_list;
  for (const auto& r : regions) countries.push_back(r.code);
  for (const auto& s : sectors) sector_list.push_back(s.code);
  return WorldDims(std::move(countries), std::move(sector_list));
}

std::string CodeRegistry::sector_name(const std::string& code) const {
  for (const auto& s : sectors) {
    if (s.code == code) return s.name;
  }
  return code;
}

const CodeRegistry& icio_registry() {
  static const CodeRegistry registry = [] {
    CodeRegistry r;
    for (const auto& row : csv::parse(detail::kRegionsCsv).rows) {
      if (row.size() != 3) throw IoError("embedded regions table is malformed");
      r.regions.push_back({row[0], row[1], row[2]});
    }
    for (const auto& row : csv::parse(detail::kSectorsCsv).rows) {
      if (row.size() != 2) throw IoError("embedded sectors table is malformed");
      r.sectors.push_back({row[0], row[1]});
    }
    return r;
  }();
  return registry;
}

}  // namespace tradeshock
