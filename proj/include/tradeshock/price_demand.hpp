#pragma once

#include "tradeshock/block_matrix.hpp"
#include "tradeshock/tariff.hpp"

namespace tradeshock {

/// Producer-price side of an equilibrium. Baseline: all deltas zero, prices one.
struct PriceState {
  Vector producer_prices;    // 1 + price_delta
  Vector import_cost_shock;  // first-round tariff cost per (country, sector)
  Vector price_delta;

  static PriceState baseline(std::size_t dim);
};

/// Direct unit-cost increase of each sector from tariffs on imported
/// intermediates: sum over commodities y and foreign origins o of
/// A[y, j] * T[(o,y), (d,y)] * tau[d][o][y].
Vector tariff_cost_shock(const BlockMatrix& coefficients, const BlockMatrix& shares,
                         const TariffTensor& tariffs);

/// Cost-push dual: solves (I - (T A)') dp = dpm.
Vector propagate_prices(const BlockMatrix& coefficients, const BlockMatrix& shares,
                        const Vector& import_cost_shock);

/// Price change of the composite commodity bought by final users in each
/// (destination, commodity): share-weighted delivered price minus one,
/// sum_o T[(o,y),(d,y)] * ((1 + dp[o,y]) * (1 + tau[d][o][y])) - 1.
Vector final_demand_price_delta(const BlockMatrix& shares, const Vector& price_delta,
                                const TariffTensor& tariffs);

/// Isoelastic own-price final demand: fd = base_fd * (1 + dp)^epsilon.
class DemandResponse {
 public:
  /// epsilon has one entry per commodity; base_fd one per (destination, commodity).
  DemandResponse(const WorldDims& dims, Vector epsilon, Vector base_fd);

  const Vector& epsilon() const noexcept { return epsilon_; }
  const Vector& base_final_demand() const noexcept { return base_fd_; }

  /// Throws if any 1 + price_delta <= 0.
  Vector respond(const Vector& price_delta) const;

 private:
  std::size_t sectors_;
  Vector epsilon_;
  Vector base_fd_;
};

inline Vector demand_response(const DemandResponse& response, const Vector& price_delta) {
  return response.respond(price_delta);
}

}  // namespace tradeshock
