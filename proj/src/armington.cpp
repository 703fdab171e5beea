#include "tradeshock/armington.hpp"

#include <cmath>
#include <string>

#include "tradeshock/error.hpp"

namespace tradeshock {

ArmingtonParams ArmingtonParams::calibrate(const BlockMatrix& base_shares, Vector sigma) {
  if (base_shares.kind() != BlockKind::Shares) {
    throw DimensionError("calibrate: base shares must be a T matrix");
  }
  const WorldDims& dims = base_shares.dims();
  if (static_cast<std::size_t>(sigma.size()) != dims.sectors()) {
    throw DimensionError("calibrate: need one sigma per commodity (" +
                         std::to_string(dims.sectors()) + "), got " +
                         std::to_string(sigma.size()));
  }
  for (Eigen::Index y = 0; y < sigma.size(); ++y) {
    if (!std::isfinite(sigma[y]) || !(sigma[y] > 1.0)) {
      throw ScenarioError("elasticity of substitution for " +
                          dims.sector_codes()[static_cast<std::size_t>(y)] + " is " +
                          std::to_string(sigma[y]) + "; it must exceed 1");
    }
  }
  return ArmingtonParams(base_shares, std::move(sigma));
}

DeliveredPrices::DeliveredPrices(std::size_t countries, std::size_t sectors)
    : countries_(countries), sectors_(sectors), values_(countries * countries * sectors, 1.0) {}

void DeliveredPrices::set(std::size_t dest, std::size_t origin, std::size_t commodity,
                          double price) {
  if (!(price > 0.0) || !std::isfinite(price)) {
    throw SolveError("delivered price must be positive and finite, got " + std::to_string(price));
  }
  values_[(dest * countries_ + origin) * sectors_ + commodity] = price;
}

DeliveredPrices DeliveredPrices::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw SolveError("price scaling factor must be positive and finite");
  }
  DeliveredPrices out(*this);
  for (double& v : out.values_) v *= factor;
  return out;
}

DeliveredPrices DeliveredPrices::from_producer_prices(const WorldDims& dims,
                                                      const Vector& price_delta,
                                                      const TariffTensor& tariffs) {
  const std::size_t big_n = dims.countries();
  const std::size_t n = dims.sectors();
  if (static_cast<std::size_t>(price_delta.size()) != dims.size() ||
      tariffs.countries() != big_n || tariffs.sectors() != n) {
    throw DimensionError("delivered prices: inputs do not match the world dims");
  }
  DeliveredPrices out(big_n, n);
  for (std::size_t d = 0; d < big_n; ++d) {
    for (std::size_t o = 0; o < big_n; ++o) {
      for (std::size_t y = 0; y < n; ++y) {
        const double producer = 1.0 + price_delta[static_cast<Eigen::Index>(dims.index(o, y))];
        out.set(d, o, y, producer * (1.0 + tariffs.at(d, o, y)));
      }
    }
  }
  return out;
}

BlockMatrix update_shares(const ArmingtonParams& params, const DeliveredPrices& prices) {
  const BlockMatrix& base = params.base_shares();
  const WorldDims& dims = base.dims();
  const std::size_t n = dims.sectors();
  if (prices.countries() != dims.countries() || prices.sectors() != n) {
    throw DimensionError("update_shares: price tensor does not match the world dims");
  }

  const SparseMatrix& t0 = base.entries();
  std::vector<double> values(base.values().begin(), base.values().end());
  const int* outer = t0.outerIndexPtr();
  const int* inner = t0.innerIndexPtr();

  for (Eigen::Index col = 0; col < t0.outerSize(); ++col) {
    const std::size_t dest = static_cast<std::size_t>(col) / n;
    const std::size_t y = static_cast<std::size_t>(col) % n;
    const double exponent = 1.0 - params.sigma()[static_cast<Eigen::Index>(y)];
    double denom = 0.0;
    for (int k = outer[col]; k < outer[col + 1]; ++k) {
      const std::size_t origin = static_cast<std::size_t>(inner[k]) / n;
      const double w = values[static_cast<std::size_t>(k)];
      values[static_cast<std::size_t>(k)] =
          w == 0.0 ? 0.0 : w * std::pow(prices.at(dest, origin, y), exponent);
      denom += values[static_cast<std::size_t>(k)];
    }
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      throw SolveError("update_shares: degenerate share column " +
                       dims.label(static_cast<std::size_t>(col)));
    }
    for (int k = outer[col]; k < outer[col + 1]; ++k) values[static_cast<std::size_t>(k)] /= denom;
  }
  return base.with_values(values);
}

}  // namespace tradeshock
