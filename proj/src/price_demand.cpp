#include "tradeshock/price_demand.hpp"

#include <cmath>
#include <string>

#include "tradeshock/error.hpp"
#include "tradeshock/mrio_core.hpp"

namespace tradeshock {

PriceState PriceState::baseline(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return {Vector::Ones(n), Vector::Zero(n), Vector::Zero(n)};
}

namespace {

void check_tariff_shape(const WorldDims& dims, const TariffTensor& tariffs, const char* op) {
  if (tariffs.countries() != dims.countries() || tariffs.sectors() != dims.sectors()) {
    throw DimensionError(std::string(op) + ": tariff tensor does not match the world dims");
  }
}

}  // namespace

Vector tariff_cost_shock(const BlockMatrix& coefficients, const BlockMatrix& shares,
                         const TariffTensor& tariffs) {
  if (coefficients.kind() != BlockKind::Coefficients || shares.kind() != BlockKind::Shares) {
    throw DimensionError("tariff_cost_shock: expected A and T");
  }
  const WorldDims& dims = shares.dims();
  if (!(coefficients.dims() == dims)) throw DimensionError("tariff_cost_shock: world dims differ");
  check_tariff_shape(dims, tariffs, "tariff_cost_shock");
  const std::size_t n = dims.sectors();

  // Tariff-weighted import share per (d, y): sum_{o != d} T[(o,y),(d,y)] tau[d][o][y].
  Vector taxed_share = Vector::Zero(static_cast<Eigen::Index>(dims.size()));
  const SparseMatrix& t = shares.entries();
  for (Eigen::Index col = 0; col < t.outerSize(); ++col) {
    const std::size_t dest = static_cast<std::size_t>(col) / n;
    const std::size_t y = static_cast<std::size_t>(col) % n;
    for (SparseMatrix::InnerIterator it(t, col); it; ++it) {
      const std::size_t origin = static_cast<std::size_t>(it.row()) / n;
      if (origin != dest) taxed_share[col] += it.value() * tariffs.at(dest, origin, y);
    }
  }
  // A is block-diagonal, so A' * taxed_share sums over commodities within the buyer's country.
  return coefficients.entries().transpose() * taxed_share;
}

Vector propagate_prices(const BlockMatrix& coefficients, const BlockMatrix& shares,
                        const Vector& import_cost_shock) {
  return solve_leontief_transposed(coefficients, shares, import_cost_shock);
}

Vector final_demand_price_delta(const BlockMatrix& shares, const Vector& price_delta,
                                const TariffTensor& tariffs) {
  const WorldDims& dims = shares.dims();
  check_tariff_shape(dims, tariffs, "final_demand_price_delta");
  if (static_cast<std::size_t>(price_delta.size()) != dims.size()) {
    throw DimensionError("final_demand_price_delta: price vector has the wrong length");
  }
  const std::size_t n = dims.sectors();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dims.size()));
  const SparseMatrix& t = shares.entries();
  for (Eigen::Index col = 0; col < t.outerSize(); ++col) {
    const std::size_t dest = static_cast<std::size_t>(col) / n;
    const std::size_t y = static_cast<std::size_t>(col) % n;
    double index = 0.0;
    for (SparseMatrix::InnerIterator it(t, col); it; ++it) {
      const std::size_t origin = static_cast<std::size_t>(it.row()) / n;
      const double delivered = (1.0 + price_delta[it.row()]) * (1.0 + tariffs.at(dest, origin, y));
      index += it.value() * (delivered - 1.0);
    }
    out[col] = index;
  }
  return out;
}

DemandResponse::DemandResponse(const WorldDims& dims, Vector epsilon, Vector base_fd)
    : sectors_(dims.sectors()), epsilon_(std::move(epsilon)), base_fd_(std::move(base_fd)) {
  if (static_cast<std::size_t>(epsilon_.size()) != dims.sectors()) {
    throw DimensionError("demand response: need one epsilon per commodity");
  }
  if (static_cast<std::size_t>(base_fd_.size()) != dims.size()) {
    throw DimensionError("demand response: base final demand has the wrong length");
  }
  for (Eigen::Index y = 0; y < epsilon_.size(); ++y) {
    if (!std::isfinite(epsilon_[y])) throw ScenarioError("demand elasticity must be finite");
  }
  for (Eigen::Index i = 0; i < base_fd_.size(); ++i) {
    if (!(base_fd_[i] >= 0.0)) throw DimensionError("base final demand must be non-negative");
  }
}

Vector DemandResponse::respond(const Vector& price_delta) const {
  if (price_delta.size() != base_fd_.size()) {
    throw DimensionError("demand response: price vector has the wrong length");
  }
  Vector fd(base_fd_.size());
  for (Eigen::Index i = 0; i < fd.size(); ++i) {
    const double level = 1.0 + price_delta[i];
    if (!(level > 0.0)) {
      throw SolveError("demand response: price level " + std::to_string(level) +
                       " is not positive");
    }
    const double eps = epsilon_[static_cast<Eigen::Index>(static_cast<std::size_t>(i) % sectors_)];
    fd[i] = eps == 0.0 ? base_fd_[i] : base_fd_[i] * std::pow(level, eps);
  }
  return fd;
}

}  // namespace tradeshock
