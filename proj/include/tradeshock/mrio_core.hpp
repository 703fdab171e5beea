#pragma once

#include "tradeshock/block_matrix.hpp"

namespace tradeshock {

/// A = Z * diag(x)^-1. Zero-output sectors get zero coefficient columns.
/// Throws when Z is not an Intermediate matrix, when x has the wrong length
/// or negative entries, or when a nonzero Z column meets zero output.
BlockMatrix build_coefficients(const BlockMatrix& intermediate, const Vector& gross_output);

/// T = ALL with every (destination, commodity) column divided by its total,
/// so shares sum to one over origins. Rejects columns with zero supply.
BlockMatrix normalize_allocation(const BlockMatrix& allocation);

/// Options for the Leontief-type solves (I - TA) x = b and (I - (TA)') p = b.
struct LinearSolveOptions {
  double tolerance = 1e-13;         // relative 2-norm residual for BiCGSTAB
  double residual_bound = 1e-10;    // accepted relative inf-norm residual
  int max_iterations = 2000;
  int refinement_rounds = 4;
};

/// Solves (I - T A) x = T fd without forming the inverse.
///
/// `guess`, when non-empty, warm-starts the iterative solver. Negative
/// round-off no larger than 1e-12 * max(1, |x|_inf) is clamped to zero;
/// anything more negative, or a residual above the bound, throws SolveError.
Vector solve_production(const BlockMatrix& coefficients, const BlockMatrix& shares,
                        const Vector& final_demand, const Vector& guess = Vector(),
                        const LinearSolveOptions& options = {});

/// Solves (I - T A) y = rhs for an arbitrary right-hand side.
Vector solve_leontief(const BlockMatrix& coefficients, const BlockMatrix& shares,
                      const Vector& rhs, const Vector& guess = Vector(),
                      const LinearSolveOptions& options = {});

/// Solves (I - (T A)') y = rhs, the cost-push price dual.
Vector solve_leontief_transposed(const BlockMatrix& coefficients, const BlockMatrix& shares,
                                 const Vector& rhs, const Vector& guess = Vector(),
                                 const LinearSolveOptions& options = {});

struct TradeFlows {
  /// Flow of commodity y from origin o to destination d at ((o,y), (d,y)), o != d.
  SparseMatrix bilateral;
  Vector sector_exports;    // per (origin, commodity): row sums of bilateral
  Vector sector_imports;    // per (destination, commodity): column sums of bilateral
  Vector imports;           // per destination country
  Vector exports;           // per origin country
};

/// Bilateral trade T2 (A diag(x) + fd) where T2 is T with the domestic
/// country blocks removed, aggregated to country imports and exports.
TradeFlows compute_trade_flows(const BlockMatrix& shares, const BlockMatrix& coefficients,
                               const Vector& gross_output, const Vector& final_demand);

/// Total absorption per (destination, commodity): intermediate use A x plus final demand.
Vector absorption(const BlockMatrix& coefficients, const Vector& gross_output,
                  const Vector& final_demand);

}  // namespace tradeshock
