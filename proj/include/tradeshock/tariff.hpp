#pragma once

#include <cstddef>
#include <vector>

#include "tradeshock/world_dims.hpp"

namespace tradeshock {

/// Dense ad-valorem add-on rates tau[importer][exporter][commodity].
///
/// Rates are changes relative to the calibrated baseline, so zero means
/// "as in the data". Domestic cells (importer == exporter) are always zero.
class TariffTensor {
 public:
  TariffTensor(std::size_t countries, std::size_t sectors);
  explicit TariffTensor(const WorldDims& dims) : TariffTensor(dims.countries(), dims.sectors()) {}

  std::size_t countries() const noexcept { return countries_; }
  std::size_t sectors() const noexcept { return sectors_; }

  double at(std::size_t importer, std::size_t exporter, std::size_t commodity) const noexcept {
    return rates_[offset(importer, exporter, commodity)];
  }
  /// Throws for domestic cells with a nonzero rate or 1 + rate <= 0.
  void set(std::size_t importer, std::size_t exporter, std::size_t commodity, double rate);

  bool is_zero() const noexcept;
  TariffTensor& operator+=(const TariffTensor& other);

  const std::vector<double>& data() const noexcept { return rates_; }

  friend bool operator==(const TariffTensor&, const TariffTensor&) = default;

 private:
  std::size_t offset(std::size_t d, std::size_t o, std::size_t y) const noexcept {
    return (d * countries_ + o) * sectors_ + y;
  }

  std::size_t countries_;
  std::size_t sectors_;
  std::vector<double> rates_;
};

}  // namespace tradeshock
