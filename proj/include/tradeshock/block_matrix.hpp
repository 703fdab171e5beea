#pragma once

#include <span>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tradeshock/world_dims.hpp"

namespace tradeshock {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

enum class BlockKind {
  Intermediate,  // Z: intermediate use, block-diagonal by destination country
  Coefficients,  // A: technical coefficients, block-diagonal by destination country
  Allocation,    // ALL: bilateral supply, commodity-diagonal inside each country pair
  Shares,        // T: column-normalized ALL
};

std::string_view to_string(BlockKind kind) noexcept;

/// An Nn x Nn sparse matrix tagged with its role in the MRIO system.
///
/// Construction enforces the pattern implied by the kind: Z and A only have
/// entries inside diagonal country blocks, ALL and T only at
/// (o*n + y, d*n + y). All entries are finite and non-negative. A must have
/// column sums below one; every column of T must sum to one within 1e-12.
///
/// Instances are immutable; updates produce new matrices with the same
/// sparsity pattern via with_values().
class BlockMatrix {
 public:
  BlockMatrix(WorldDims dims, BlockKind kind, SparseMatrix entries);

  static BlockMatrix from_triplets(WorldDims dims, BlockKind kind,
                                   std::span<const Triplet> triplets);

  const WorldDims& dims() const noexcept { return dims_; }
  BlockKind kind() const noexcept { return kind_; }
  const SparseMatrix& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }

  double coeff(Eigen::Index row, Eigen::Index col) const { return entries_.coeff(row, col); }

  /// Stored values in column-major order; explicit zeros are part of the pattern.
  std::span<const double> values() const noexcept {
    return {entries_.valuePtr(), static_cast<std::size_t>(entries_.nonZeros())};
  }

  /// Copy with identical pattern and replaced values (re-validated).
  BlockMatrix with_values(std::span<const double> values) const;

  Vector column_sums() const;

  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(entries_); }

 private:
  void validate() const;

  WorldDims dims_;
  BlockKind kind_;
  SparseMatrix entries_;
};

/// Tolerance on T column sums.
inline constexpr double kStochasticTolerance = 1e-12;

}  // namespace tradeshock
