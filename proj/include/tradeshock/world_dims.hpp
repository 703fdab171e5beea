#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tradeshock {

/// Country and sector code lists of an MRIO world. Every vector and matrix
/// in the model is indexed by the flattened position country * n + sector.
class WorldDims {
 public:
  WorldDims(std::vector<std::string> country_codes, std::vector<std::string> sector_codes);

  std::size_t countries() const noexcept { return countries_.size(); }
  std::size_t sectors() const noexcept { return sectors_.size(); }
  std::size_t size() const noexcept { return countries_.size() * sectors_.size(); }

  std::size_t index(std::size_t country, std::size_t sector) const noexcept {
    return country * sectors_.size() + sector;
  }
  std::size_t country_of(std::size_t flat) const noexcept { return flat / sectors_.size(); }
  std::size_t sector_of(std::size_t flat) const noexcept { return flat % sectors_.size(); }

  const std::vector<std::string>& country_codes() const noexcept { return countries_; }
  const std::vector<std::string>& sector_codes() const noexcept { return sectors_; }

  std::optional<std::size_t> find_country(std::string_view code) const;
  std::optional<std::size_t> find_sector(std::string_view code) const;

  /// "USA:C24" style label of a flat index.
  std::string label(std::size_t flat) const;

  friend bool operator==(const WorldDims& a, const WorldDims& b) {
    return a.countries_ == b.countries_ && a.sectors_ == b.sectors_;
  }

 private:
  std::vector<std::string> countries_;
  std::vector<std::string> sectors_;
  std::unordered_map<std::string, std::size_t> country_lookup_;
  std::unordered_map<std::string, std::size_t> sector_lookup_;
};

}  // namespace tradeshock
