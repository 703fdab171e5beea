#include "tradeshock/world_dims.hpp"

#include "tradeshock/error.hpp"

namespace tradeshock {

namespace {

std::unordered_map<std::string, std::size_t> build_lookup(const std::vector<std::string>& codes,
                                                          std::string_view what) {
  std::unordered_map<std::string, std::size_t> lookup;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i].empty()) {
      throw DimensionError(std::string(what) + " code at position " + std::to_string(i) +
                           " is empty");
    }
    if (!lookup.emplace(codes[i], i).second) {
      throw DimensionError("duplicate " + std::string(what) + " code '" + codes[i] + "'");
    }
  }
  return lookup;
}

}  // namespace

WorldDims::WorldDims(std::vector<std::string> country_codes, std::vector<std::string> sector_codes)
    : countries_(std::move(country_codes)), sectors_(std::move(sector_codes)) {
  if (countries_.empty()) throw DimensionError("a world needs at least one country");
  if (sectors_.empty()) throw DimensionError("a world needs at least one sector");
  country_lookup_ = build_lookup(countries_, "country");
  sector_lookup_ = build_lookup(sectors_, "sector");
}

std::optional<std::size_t> WorldDims::find_country(std::string_view code) const {
  auto it = country_lookup_.find(std::string(code));
  if (it == country_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> WorldDims::find_sector(std::string_view code) const {
  auto it = sector_lookup_.find(std::string(code));
  if (it == sector_lookup_.end()) return std::nullopt;
  return it->second;
}

std::string WorldDims::label(std::size_t flat) const {
  return countries_[country_of(flat)] + ":" + sectors_[sector_of(flat)];
}

DataError::DataError(std::vector<Diagnostic> diagnostics)
    : Error([&] {
        std::string msg = std::to_string(diagnostics.size()) + " validation error(s)";
        if (!diagnostics.empty()) msg += "; first: " + diagnostics.front().message;
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

}  // namespace tradeshock
