#include "tradeshock/income_groups.hpp"

#include <algorithm>
#include <set>

#include "tradeshock/error.hpp"

namespace tradeshock {

IncomeGroups::IncomeGroups(const WorldDims& dims, std::vector<std::string> group_of_country)
    : group_of_country_(std::move(group_of_country)) {
  if (group_of_country_.size() != dims.countries()) {
    throw DimensionError("income groups: expected " + std::to_string(dims.countries()) +
                         " countries, got " + std::to_string(group_of_country_.size()));
  }
  std::set<std::string> unique;
  for (const auto& g : group_of_country_) {
    if (g.empty()) throw DimensionError("income groups: empty group name");
    unique.insert(g);
  }
  groups_.assign(unique.begin(), unique.end());
  auto other = std::find(groups_.begin(), groups_.end(), kDefaultIncomeGroup);
  if (other != groups_.end()) std::rotate(other, other + 1, groups_.end());

  index_of_country_.reserve(group_of_country_.size());
  for (const auto& g : group_of_country_) {
    index_of_country_.push_back(
        static_cast<std::size_t>(std::find(groups_.begin(), groups_.end(), g) - groups_.begin()));
  }
}

IncomeGroups IncomeGroups::from_mapping(const WorldDims& dims,
                                        const std::map<std::string, std::string>& mapping) {
  std::vector<std::string> groups;
  groups.reserve(dims.countries());
  for (const auto& code : dims.country_codes()) {
    auto it = mapping.find(code);
    groups.push_back(it == mapping.end() ? std::string(kDefaultIncomeGroup) : it->second);
  }
  return IncomeGroups(dims, std::move(groups));
}

bool IncomeGroups::has_group(const std::string& name) const {
  return std::find(groups_.begin(), groups_.end(), name) != groups_.end();
}

}  // namespace tradeshock
