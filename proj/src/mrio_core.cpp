#include "tradeshock/mrio_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "leontief_operator.hpp"
#include "tradeshock/error.hpp"

namespace tradeshock {

namespace {

void require_kind(const BlockMatrix& m, BlockKind kind, const char* op) {
  if (m.kind() != kind) {
    throw DimensionError(std::string(op) + ": expected a " + std::string(to_string(kind)) +
                         " matrix, got " + std::string(to_string(m.kind())));
  }
}

void require_length(const Vector& v, std::size_t n, const char* op, const char* what) {
  if (static_cast<std::size_t>(v.size()) != n) {
    throw DimensionError(std::string(op) + ": " + what + " has length " +
                         std::to_string(v.size()) + ", expected " + std::to_string(n));
  }
}

void require_same_world(const BlockMatrix& a, const BlockMatrix& b, const char* op) {
  if (!(a.dims() == b.dims())) throw DimensionError(std::string(op) + ": world dims differ");
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

Vector solve_system(const BlockMatrix& coefficients, const BlockMatrix& shares, const Vector& rhs,
                    const Vector& guess, const LinearSolveOptions& options, bool transposed) {
  require_kind(coefficients, BlockKind::Coefficients, "leontief solve");
  require_kind(shares, BlockKind::Shares, "leontief solve");
  require_same_world(coefficients, shares, "leontief solve");
  const std::size_t dim = coefficients.dims().size();
  require_length(rhs, dim, "leontief solve", "right-hand side");

  const double rhs_norm = inf_norm(rhs);
  if (rhs_norm == 0.0) return Vector::Zero(static_cast<Eigen::Index>(dim));

  detail::LeontiefOperator op(coefficients.entries(), shares.entries(), transposed);
  Eigen::BiCGSTAB<detail::LeontiefOperator, Eigen::IdentityPreconditioner> solver;
  solver.setTolerance(options.tolerance);
  solver.setMaxIterations(options.max_iterations);
  solver.compute(op);

  Vector x;
  if (guess.size() == static_cast<Eigen::Index>(dim)) {
    x = solver.solveWithGuess(rhs, guess);
  } else {
    x = solver.solve(rhs);
  }

  // Iterative refinement on the residual until the inf-norm bound holds.
  Vector residual = rhs - op.apply(x);
  for (int round = 0; round < options.refinement_rounds &&
                      inf_norm(residual) / rhs_norm >= options.residual_bound;
       ++round) {
    Vector correction = solver.solve(residual);
    if (!correction.allFinite()) break;
    x += correction;
    residual = rhs - op.apply(x);
  }

  const double rel = inf_norm(residual) / rhs_norm;
  if (!x.allFinite() || !(rel < options.residual_bound)) {
    throw SolveError("Leontief system did not converge: relative residual " + std::to_string(rel) +
                     " after " + std::to_string(solver.iterations()) +
                     " iterations; the inputs are likely economically inconsistent");
  }
  return x;
}

}  // namespace

BlockMatrix build_coefficients(const BlockMatrix& intermediate, const Vector& gross_output) {
  require_kind(intermediate, BlockKind::Intermediate, "build_coefficients");
  const WorldDims& dims = intermediate.dims();
  require_length(gross_output, dims.size(), "build_coefficients", "gross output");

  const SparseMatrix& z = intermediate.entries();
  SparseMatrix a = z;
  for (Eigen::Index col = 0; col < a.outerSize(); ++col) {
    const double out = gross_output[col];
    if (!std::isfinite(out) || out < 0.0) {
      throw StructureError("build_coefficients: gross output of " +
                           dims.label(static_cast<std::size_t>(col)) + " is " +
                           std::to_string(out));
    }
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      if (out == 0.0) {
        if (it.value() != 0.0) {
          throw StructureError("build_coefficients: column " +
                               dims.label(static_cast<std::size_t>(col)) +
                               " uses inputs but has zero gross output");
        }
        continue;
      }
      it.valueRef() = it.value() / out;
    }
  }
  return BlockMatrix(dims, BlockKind::Coefficients, std::move(a));
}

BlockMatrix normalize_allocation(const BlockMatrix& allocation) {
  require_kind(allocation, BlockKind::Allocation, "normalize_allocation");
  const WorldDims& dims = allocation.dims();
  SparseMatrix t = allocation.entries();
  for (Eigen::Index col = 0; col < t.outerSize(); ++col) {
    double total = 0.0;
    for (SparseMatrix::InnerIterator it(t, col); it; ++it) total += it.value();
    if (!(total > 0.0)) {
      throw StructureError("normalize_allocation: destination-commodity " +
                           dims.label(static_cast<std::size_t>(col)) + " has zero total supply");
    }
    for (SparseMatrix::InnerIterator it(t, col); it; ++it) it.valueRef() = it.value() / total;
  }
  return BlockMatrix(dims, BlockKind::Shares, std::move(t));
}

Vector solve_leontief(const BlockMatrix& coefficients, const BlockMatrix& shares, const Vector& rhs,
                      const Vector& guess, const LinearSolveOptions& options) {
  return solve_system(coefficients, shares, rhs, guess, options, false);
}

Vector solve_leontief_transposed(const BlockMatrix& coefficients, const BlockMatrix& shares,
                                 const Vector& rhs, const Vector& guess,
                                 const LinearSolveOptions& options) {
  return solve_system(coefficients, shares, rhs, guess, options, true);
}

Vector solve_production(const BlockMatrix& coefficients, const BlockMatrix& shares,
                        const Vector& final_demand, const Vector& guess,
                        const LinearSolveOptions& options) {
  require_kind(shares, BlockKind::Shares, "solve_production");
  require_length(final_demand, shares.dims().size(), "solve_production", "final demand");
  const Vector rhs = shares.entries() * final_demand;
  Vector x = solve_leontief(coefficients, shares, rhs, guess, options);

  const double floor = -1e-12 * std::max(1.0, inf_norm(x));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0) {
      if (x[i] < floor) {
        throw SolveError("solve_production: negative output " + std::to_string(x[i]) + " at " +
                         shares.dims().label(static_cast<std::size_t>(i)));
      }
      x[i] = 0.0;
    }
  }
  return x;
}

Vector absorption(const BlockMatrix& coefficients, const Vector& gross_output,
                  const Vector& final_demand) {
  require_kind(coefficients, BlockKind::Coefficients, "absorption");
  const std::size_t dim = coefficients.dims().size();
  require_length(gross_output, dim, "absorption", "gross output");
  require_length(final_demand, dim, "absorption", "final demand");
  return coefficients.entries() * gross_output + final_demand;
}

TradeFlows compute_trade_flows(const BlockMatrix& shares, const BlockMatrix& coefficients,
                               const Vector& gross_output, const Vector& final_demand) {
  require_kind(shares, BlockKind::Shares, "compute_trade_flows");
  require_same_world(shares, coefficients, "compute_trade_flows");
  const WorldDims& dims = shares.dims();
  const std::size_t n = dims.sectors();
  const Vector demand = absorption(coefficients, gross_output, final_demand);

  TradeFlows flows;
  flows.bilateral = shares.entries();
  flows.sector_exports = Vector::Zero(static_cast<Eigen::Index>(dims.size()));
  flows.sector_imports = Vector::Zero(static_cast<Eigen::Index>(dims.size()));
  flows.imports = Vector::Zero(static_cast<Eigen::Index>(dims.countries()));
  flows.exports = Vector::Zero(static_cast<Eigen::Index>(dims.countries()));

  SparseMatrix& b = flows.bilateral;
  for (Eigen::Index col = 0; col < b.outerSize(); ++col) {
    const std::size_t dest = static_cast<std::size_t>(col) / n;
    for (SparseMatrix::InnerIterator it(b, col); it; ++it) {
      const std::size_t origin = static_cast<std::size_t>(it.row()) / n;
      if (origin == dest) {
        it.valueRef() = 0.0;
        continue;
      }
      const double flow = it.value() * demand[col];
      it.valueRef() = flow;
      flows.sector_exports[it.row()] += flow;
      flows.sector_imports[col] += flow;
    }
  }
  b.prune(0.0, 0.0);

  for (std::size_t i = 0; i < dims.size(); ++i) {
    flows.exports[static_cast<Eigen::Index>(dims.country_of(i))] += flows.sector_exports[i];
    flows.imports[static_cast<Eigen::Index>(dims.country_of(i))] += flows.sector_imports[i];
  }
  return flows;
}

}  // namespace tradeshock
