#pragma once

// Matrix-free I - T A (or its transpose) for Eigen's iterative solvers.
// T A is dense at ICIO scale (3465^2 entries) while A and T are sparse, so
// products are applied factor by factor.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "tradeshock/block_matrix.hpp"

namespace tradeshock::detail {
class LeontiefOperator;
}

namespace Eigen::internal {
template <>
struct traits<tradeshock::detail::LeontiefOperator>
    : public Eigen::internal::traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace tradeshock::detail {

class LeontiefOperator : public Eigen::EigenBase<LeontiefOperator> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum {
    ColsAtCompileTime = Eigen::Dynamic,
    MaxColsAtCompileTime = Eigen::Dynamic,
    IsRowMajor = false
  };

  LeontiefOperator(const SparseMatrix& coefficients, const SparseMatrix& shares, bool transposed)
      : a_(&coefficients), t_(&shares), transposed_(transposed) {}

  Eigen::Index rows() const { return a_->rows(); }
  Eigen::Index cols() const { return a_->cols(); }

  template <typename Rhs>
  Eigen::Product<LeontiefOperator, Rhs, Eigen::AliasFreeProduct> operator*(
      const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<LeontiefOperator, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  /// out = (I - TA) v, or (I - A'T') v when transposed.
  template <typename In>
  Vector apply(const In& v) const {
    if (transposed_) {
      Vector tv = t_->transpose() * v;
      return v - a_->transpose() * tv;
    }
    Vector av = (*a_) * v;
    return v - (*t_) * av;
  }

 private:
  const SparseMatrix* a_;
  const SparseMatrix* t_;
  bool transposed_;
};

}  // namespace tradeshock::detail

namespace Eigen::internal {

template <typename Rhs>
struct generic_product_impl<tradeshock::detail::LeontiefOperator, Rhs, SparseShape, DenseShape,
                            GemvProduct>
    : generic_product_impl_base<
          tradeshock::detail::LeontiefOperator, Rhs,
          generic_product_impl<tradeshock::detail::LeontiefOperator, Rhs>> {
  using Scalar = typename Product<tradeshock::detail::LeontiefOperator, Rhs>::Scalar;

  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const tradeshock::detail::LeontiefOperator& lhs,
                            const Rhs& rhs, const Scalar& alpha) {
    dst.noalias() += alpha * lhs.apply(rhs);
  }
};

}  // namespace Eigen::internal
