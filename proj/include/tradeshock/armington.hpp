#pragma once

#include <cstddef>
#include <vector>

#include "tradeshock/block_matrix.hpp"
#include "tradeshock/tariff.hpp"

namespace tradeshock {

/// Calibrated Armington preferences: one elasticity of substitution per
/// commodity and the preference weights a^sigma, which at unit delivered
/// prices equal the baseline trade shares.
class ArmingtonParams {
 public:
  /// Throws if any sigma <= 1 or base_shares is not a column-stochastic T.
  static ArmingtonParams calibrate(const BlockMatrix& base_shares, Vector sigma);

  const Vector& sigma() const noexcept { return sigma_; }
  const BlockMatrix& base_shares() const noexcept { return base_; }
  std::span<const double> weights() const noexcept { return base_.values(); }

 private:
  ArmingtonParams(BlockMatrix base, Vector sigma) : base_(std::move(base)), sigma_(std::move(sigma)) {}

  BlockMatrix base_;
  Vector sigma_;
};

/// Delivered price of commodity y shipped from origin o to destination d,
/// relative to the baseline (all ones).
class DeliveredPrices {
 public:
  DeliveredPrices(std::size_t countries, std::size_t sectors);

  /// (1 + dp[o,y]) * (1 + tau[d][o][y]).
  static DeliveredPrices from_producer_prices(const WorldDims& dims, const Vector& price_delta,
                                              const TariffTensor& tariffs);

  std::size_t countries() const noexcept { return countries_; }
  std::size_t sectors() const noexcept { return sectors_; }

  double at(std::size_t dest, std::size_t origin, std::size_t commodity) const noexcept {
    return values_[(dest * countries_ + origin) * sectors_ + commodity];
  }
  void set(std::size_t dest, std::size_t origin, std::size_t commodity, double price);

  DeliveredPrices scaled(double factor) const;

 private:
  std::size_t countries_;
  std::size_t sectors_;
  std::vector<double> values_;
};

/// Armington share rule: s = s0 p^(1-sigma) / sum_k s0_k p_k^(1-sigma)
/// per (destination, commodity) column. Zero baseline shares stay zero.
BlockMatrix update_shares(const ArmingtonParams& params, const DeliveredPrices& prices);

}  // namespace tradeshock
