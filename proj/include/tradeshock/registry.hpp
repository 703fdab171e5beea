#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tradeshock/world_dims.hpp"

namespace tradeshock {

struct RegionInfo {
  std::string code;
  std::string name;
  std::string income_group;
};

struct SectorInfo {
  std::string code;
  std::string name;
};

/// Reference list of ICIO economies (76 countries plus ROW) and the 45 ICIO
/// industries, with the default income-group assignment. Compiled in from
/// data/regions.csv and data/sectors.csv.
struct CodeRegistry {
  std::vector<RegionInfo> regions;
  std::vector<SectorInfo> sectors;

  std::map<std::string, std::string> income_mapping() const;
  std::set<std::string> country_codes() const;
  std::set<std::string> sector_codes() const;
  std::set<std::string> group_names() const;
  /// 77 x 45 dims in registry order.
  WorldDims dims() const;
  std::string sector_name(const std::string& code) const;
};

const CodeRegistry& icio_registry();

}  // namespace tradeshock
