#pragma once

#include <functional>
#include <string_view>

#include "tradeshock/mrio_core.hpp"
#include "tradeshock/price_demand.hpp"
#include "tradeshock/tariff.hpp"
#include "tradeshock/world.hpp"

namespace tradeshock {

enum class SolveStatus { Converged, MaxIterations, Diverged };

std::string_view to_string(SolveStatus status) noexcept;

/// Max-norm relative change of each block between two successive iterates.
struct Residuals {
  double shares = 0.0;
  double prices = 0.0;
  double demand = 0.0;
  double output = 0.0;

  double max() const noexcept;
};

struct IterationReport {
  int iteration = 0;
  Residuals residuals;
};

struct SolverConfig {
  double tolerance = 1e-9;
  int max_iterations = 200;
  double damping = 0.5;  // weight on the new iterate for T and prices
  int divergence_window = 10;
  std::function<void(const IterationReport&)> progress;

  void validate() const;
};

/// Prices, shares, demand and output at a (possibly unconverged) fixed point.
struct EquilibriumState {
  BlockMatrix shares;
  PriceState prices;
  Vector consumer_price_delta;  // final-demand price index per (destination, commodity)
  Vector final_demand;
  Vector output;
  TradeFlows trade;
  int iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  Residuals residuals;

  bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// Calibrated data as an equilibrium iterate: base shares, zero price
/// changes, base final demand and the recorded gross output.
EquilibriumState initial_state(const CalibratedWorld& world);

/// Zero-tariff equilibrium. Reproduces the calibrated data in one iteration.
EquilibriumState solve_baseline(const CalibratedWorld& world, const SolverConfig& config = {});

/// One Gauss-Seidel sweep: shares, then prices, then demand, then output.
/// `damping` blends the new shares and producer prices with `from`.
EquilibriumState iterate_once(const CalibratedWorld& world, const TariffTensor& tariffs,
                              const ModelParameters& params, const EquilibriumState& from,
                              double damping);

/// Iterates sweeps from `start` (the baseline when null) until every
/// residual falls below the tolerance. Non-convergence is reported through
/// the returned status, never thrown. Divergence means the largest residual
/// grew for `divergence_window` consecutive iterations.
EquilibriumState solve_scenario(const CalibratedWorld& world, const TariffTensor& tariffs,
                                const ModelParameters& params, const SolverConfig& config = {},
                                const EquilibriumState* start = nullptr);

/// Baseline, shocked, absolute and percentage change of a quantity.
/// pct (in percent) is NaN where the baseline is zero.
struct CellDelta {
  Vector baseline;
  Vector shocked;
  Vector delta;
  Vector pct;
};

CellDelta make_delta(const Vector& baseline, const Vector& shocked);

struct DeltaReport {
  CellDelta output;           // per (country, sector)
  CellDelta exports;          // per (country, sector)
  CellDelta final_demand;     // per (destination, commodity)
  CellDelta country_exports;  // per country
  CellDelta country_imports;  // per country
};

DeltaReport diff_states(const EquilibriumState& base, const EquilibriumState& shocked);

}  // namespace tradeshock
