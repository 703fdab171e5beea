#include "tradeshock/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tradeshock/armington.hpp"
#include "tradeshock/error.hpp"

namespace tradeshock {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::Diverged: return "diverged";
  }
  return "?";
}

double Residuals::max() const noexcept {
  return std::max(std::max(shares, prices), std::max(demand, output));
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw ScenarioError("solver tolerance must be positive");
  if (max_iterations < 1) throw ScenarioError("solver needs at least one iteration");
  if (!(damping > 0.0 && damping <= 1.0)) throw ScenarioError("damping must lie in (0, 1]");
  if (divergence_window < 1) throw ScenarioError("divergence window must be positive");
}

namespace {

double relative_change(std::span<const double> next, std::span<const double> prev) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    diff = std::max(diff, std::abs(next[i] - prev[i]));
    scale = std::max(scale, std::abs(next[i]));
  }
  if (diff == 0.0) return 0.0;
  return scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity();
}

std::span<const double> span_of(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Per-solve workspace; owns the calibrated preference and demand objects.
class Sweeper {
 public:
  Sweeper(const CalibratedWorld& world, const TariffTensor& tariffs, const ModelParameters& params)
      : world_(world),
        tariffs_(tariffs),
        armington_(ArmingtonParams::calibrate(world.base_shares, params.sigma)),
        demand_(world.dims, params.epsilon, world.base_final_demand) {
    params.validate(world.dims.sectors());
    if (tariffs.countries() != world.dims.countries() ||
        tariffs.sectors() != world.dims.sectors()) {
      throw DimensionError("tariff tensor does not match the world dims");
    }
  }

  EquilibriumState sweep(const EquilibriumState& from, double damping) const {
    const BlockMatrix& a = world_.coefficients;

    // (1) delivered prices and Armington shares
    const auto delivered =
        DeliveredPrices::from_producer_prices(world_.dims, from.prices.price_delta, tariffs_);
    const BlockMatrix target = update_shares(armington_, delivered);
    std::vector<double> blended(target.values().begin(), target.values().end());
    if (damping < 1.0) {
      const auto old = from.shares.values();
      for (std::size_t k = 0; k < blended.size(); ++k) {
        blended[k] = (1.0 - damping) * old[k] + damping * blended[k];
      }
    }
    BlockMatrix shares = from.shares.with_values(blended);

    // (2) cost-push prices
    PriceState prices;
    prices.import_cost_shock = tariff_cost_shock(a, shares, tariffs_);
    const Vector dp = solve_leontief_transposed(a, shares, prices.import_cost_shock,
                                                from.prices.price_delta);
    prices.price_delta = (1.0 - damping) * from.prices.price_delta + damping * dp;
    prices.producer_prices = Vector::Ones(dp.size()) + prices.price_delta;

    // (3) final demand
    Vector cpi = final_demand_price_delta(shares, prices.price_delta, tariffs_);
    Vector fd = demand_.respond(cpi);

    // (4) output
    Vector x = solve_production(a, shares, fd, from.output);

    Residuals res;
    res.shares = relative_change(shares.values(), from.shares.values());
    res.prices = relative_change(span_of(prices.price_delta), span_of(from.prices.price_delta));
    res.demand = relative_change(span_of(fd), span_of(from.final_demand));
    res.output = relative_change(span_of(x), span_of(from.output));

    TradeFlows trade = compute_trade_flows(shares, a, x, fd);
    return EquilibriumState{std::move(shares), std::move(prices), std::move(cpi), std::move(fd),
                            std::move(x), std::move(trade), from.iterations + 1,
                            SolveStatus::MaxIterations, res};
  }

 private:
  const CalibratedWorld& world_;
  const TariffTensor& tariffs_;
  ArmingtonParams armington_;
  DemandResponse demand_;
};

}  // namespace

EquilibriumState initial_state(const CalibratedWorld& world) {
  const std::size_t dim = world.dims.size();
  TradeFlows trade = compute_trade_flows(world.base_shares, world.coefficients,
                                         world.recorded_output, world.base_final_demand);
  return EquilibriumState{world.base_shares,
                          PriceState::baseline(dim),
                          Vector::Zero(static_cast<Eigen::Index>(dim)),
                          world.base_final_demand,
                          world.recorded_output,
                          std::move(trade),
                          0,
                          SolveStatus::MaxIterations,
                          {}};
}

EquilibriumState iterate_once(const CalibratedWorld& world, const TariffTensor& tariffs,
                              const ModelParameters& params, const EquilibriumState& from,
                              double damping) {
  if (!(damping > 0.0 && damping <= 1.0)) throw ScenarioError("damping must lie in (0, 1]");
  return Sweeper(world, tariffs, params).sweep(from, damping);
}

EquilibriumState solve_scenario(const CalibratedWorld& world, const TariffTensor& tariffs,
                                const ModelParameters& params, const SolverConfig& config,
                                const EquilibriumState* start) {
  config.validate();
  const Sweeper sweeper(world, tariffs, params);

  EquilibriumState state = start ? *start : initial_state(world);
  state.iterations = 0;
  double previous = std::numeric_limits<double>::infinity();
  int growing = 0;

  for (int it = 0; it < config.max_iterations; ++it) {
    state = sweeper.sweep(state, config.damping);
    const double current = state.residuals.max();
    if (config.progress) config.progress({state.iterations, state.residuals});

    if (current < config.tolerance) {
      state.status = SolveStatus::Converged;
      return state;
    }
    growing = current > previous ? growing + 1 : 0;
    previous = current;
    if (growing >= config.divergence_window || !std::isfinite(current)) {
      state.status = SolveStatus::Diverged;
      return state;
    }
  }
  state.status = SolveStatus::MaxIterations;
  return state;
}

EquilibriumState solve_baseline(const CalibratedWorld& world, const SolverConfig& config) {
  return solve_scenario(world, TariffTensor(world.dims), ModelParameters::defaults(world.dims.sectors()),
                        config);
}

CellDelta make_delta(const Vector& baseline, const Vector& shocked) {
  if (baseline.size() != shocked.size()) throw DimensionError("make_delta: length mismatch");
  CellDelta d{baseline, shocked, shocked - baseline, Vector(baseline.size())};
  for (Eigen::Index i = 0; i < d.pct.size(); ++i) {
    d.pct[i] = baseline[i] != 0.0 ? 100.0 * d.delta[i] / baseline[i]
                                  : std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

DeltaReport diff_states(const EquilibriumState& base, const EquilibriumState& shocked) {
  if (!(base.shares.dims() == shocked.shares.dims())) {
    throw DimensionError("diff_states: states come from different worlds");
  }
  return {make_delta(base.output, shocked.output),
          make_delta(base.trade.sector_exports, shocked.trade.sector_exports),
          make_delta(base.final_demand, shocked.final_demand),
          make_delta(base.trade.exports, shocked.trade.exports),
          make_delta(base.trade.imports, shocked.trade.imports)};
}

}  // namespace tradeshock
