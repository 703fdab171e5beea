#include "tradeshock/block_matrix.hpp"

#include <cmath>
#include <string>

#include "tradeshock/error.hpp"

namespace tradeshock {

std::string_view to_string(BlockKind kind) noexcept {
  switch (kind) {
    case BlockKind::Intermediate: return "Z";
    case BlockKind::Coefficients: return "A";
    case BlockKind::Allocation: return "ALL";
    case BlockKind::Shares: return "T";
  }
  return "?";
}

BlockMatrix::BlockMatrix(WorldDims dims, BlockKind kind, SparseMatrix entries)
    : dims_(std::move(dims)), kind_(kind), entries_(std::move(entries)) {
  const auto dim = static_cast<Eigen::Index>(dims_.size());
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw DimensionError(std::string(to_string(kind_)) + " must be " + std::to_string(dim) + "x" +
                         std::to_string(dim) + ", got " + std::to_string(entries_.rows()) + "x" +
                         std::to_string(entries_.cols()));
  }
  entries_.makeCompressed();
  validate();
}

BlockMatrix BlockMatrix::from_triplets(WorldDims dims, BlockKind kind,
                                       std::span<const Triplet> triplets) {
  const auto dim = static_cast<Eigen::Index>(dims.size());
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return BlockMatrix(std::move(dims), kind, std::move(m));
}

BlockMatrix BlockMatrix::with_values(std::span<const double> values) const {
  if (values.size() != static_cast<std::size_t>(entries_.nonZeros())) {
    throw DimensionError("with_values: expected " + std::to_string(entries_.nonZeros()) +
                         " values, got " + std::to_string(values.size()));
  }
  BlockMatrix out(*this);
  std::copy(values.begin(), values.end(), out.entries_.valuePtr());
  out.validate();
  return out;
}

Vector BlockMatrix::column_sums() const {
  Vector sums = Vector::Zero(entries_.cols());
  for (Eigen::Index col = 0; col < entries_.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(entries_, col); it; ++it) sums[col] += it.value();
  }
  return sums;
}

void BlockMatrix::validate() const {
  const std::size_t n = dims_.sectors();
  const bool block_diagonal = kind_ == BlockKind::Intermediate || kind_ == BlockKind::Coefficients;
  for (Eigen::Index col = 0; col < entries_.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(entries_, col); it; ++it) {
      const auto row = static_cast<std::size_t>(it.row());
      const auto c = static_cast<std::size_t>(col);
      const double v = it.value();
      if (!std::isfinite(v) || v < 0.0) {
        throw StructureError(std::string(to_string(kind_)) + " entry (" + dims_.label(row) + ", " +
                             dims_.label(c) + ") = " + std::to_string(v) +
                             " must be finite and non-negative");
      }
      if (block_diagonal) {
        if (row / n != c / n) {
          throw StructureError(std::string(to_string(kind_)) + " has off-block entry (" +
                               dims_.label(row) + ", " + dims_.label(c) + ")");
        }
      } else if (row % n != c % n) {
        throw StructureError(std::string(to_string(kind_)) + " has off-commodity entry (" +
                             dims_.label(row) + ", " + dims_.label(c) + ")");
      }
    }
  }

  if (kind_ == BlockKind::Coefficients) {
    const Vector sums = column_sums();
    for (Eigen::Index j = 0; j < sums.size(); ++j) {
      if (!(sums[j] < 1.0)) {
        throw StructureError("A column " + dims_.label(static_cast<std::size_t>(j)) +
                             " sums to " + std::to_string(sums[j]) +
                             "; a productive economy needs column sums below 1");
      }
    }
  } else if (kind_ == BlockKind::Shares) {
    const Vector sums = column_sums();
    for (Eigen::Index j = 0; j < sums.size(); ++j) {
      if (std::abs(sums[j] - 1.0) > kStochasticTolerance) {
        throw StructureError("T column " + dims_.label(static_cast<std::size_t>(j)) +
                             " sums to " + std::to_string(sums[j]) + " instead of 1");
      }
    }
  }
}

}  // namespace tradeshock
