#include "tradeshock/tariff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tradeshock/error.hpp"

namespace tradeshock {

TariffTensor::TariffTensor(std::size_t countries, std::size_t sectors)
    : countries_(countries), sectors_(sectors), rates_(countries * countries * sectors, 0.0) {}

void TariffTensor::set(std::size_t importer, std::size_t exporter, std::size_t commodity,
                       double rate) {
  if (importer >= countries_ || exporter >= countries_ || commodity >= sectors_) {
    throw DimensionError("tariff cell out of range");
  }
  if (!std::isfinite(rate) || 1.0 + rate <= 0.0) {
    throw ScenarioError("tariff rate " + std::to_string(rate) + " gives a non-positive price");
  }
  if (importer == exporter && rate != 0.0) {
    throw ScenarioError("domestic tariff cells must stay zero");
  }
  rates_[offset(importer, exporter, commodity)] = rate;
}

bool TariffTensor::is_zero() const noexcept {
  return std::all_of(rates_.begin(), rates_.end(), [](double r) { return r == 0.0; });
}

TariffTensor& TariffTensor::operator+=(const TariffTensor& other) {
  if (other.countries_ != countries_ || other.sectors_ != sectors_) {
    throw DimensionError("tariff tensors of different shape");
  }
  for (std::size_t i = 0; i < rates_.size(); ++i) rates_[i] += other.rates_[i];
  return *this;
}

}  // namespace tradeshock
