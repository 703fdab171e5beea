#pragma once

#include <map>
#include <string>
#include <vector>

#include "tradeshock/world_dims.hpp"

namespace tradeshock {

inline constexpr const char* kDefaultIncomeGroup = "Other regions";

/// Country -> reporting group mapping (the ten-way income/region split by
/// default). Groups are listed alphabetically with kDefaultIncomeGroup last.
class IncomeGroups {
 public:
  IncomeGroups() = default;
  IncomeGroups(const WorldDims& dims, std::vector<std::string> group_of_country);

  /// Countries missing from `mapping` fall into kDefaultIncomeGroup.
  static IncomeGroups from_mapping(const WorldDims& dims,
                                   const std::map<std::string, std::string>& mapping);

  const std::string& group_of(std::size_t country) const { return group_of_country_.at(country); }
  std::size_t group_index(std::size_t country) const { return index_of_country_.at(country); }
  const std::vector<std::string>& groups() const noexcept { return groups_; }
  bool has_group(const std::string& name) const;
  std::size_t countries() const noexcept { return group_of_country_.size(); }

 private:
  std::vector<std::string> group_of_country_;
  std::vector<std::size_t> index_of_country_;
  std::vector<std::string> groups_;
};

}  // namespace tradeshock
