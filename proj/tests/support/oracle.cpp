#include "oracle.hpp"

#include <cmath>

namespace oracle {

DenseWorld densify(const tradeshock::CalibratedWorld& world) {
  DenseWorld w;
  w.countries = static_cast<int>(world.dims.countries());
  w.sectors = static_cast<int>(world.dims.sectors());
  w.a = world.coefficients.to_dense();
  w.t0 = world.base_shares.to_dense();
  w.fd0 = world.base_final_demand;
  return w;
}

Eigen::VectorXd neumann(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, double tol,
                        int max_iter) {
  Eigen::VectorXd y = b;
  for (int k = 0; k < max_iter; ++k) {
    const Eigen::VectorXd next = b + m * y;
    const double change = (next - y).lpNorm<Eigen::Infinity>();
    y = next;
    if (change <= tol * std::max(1.0, y.lpNorm<Eigen::Infinity>())) break;
  }
  return y;
}

double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double diff = (a - b).cwiseAbs().maxCoeff();
  const double scale = b.cwiseAbs().maxCoeff();
  if (diff == 0.0) return 0.0;
  return diff / scale;
}

Solution solve(const DenseWorld& w, const std::vector<double>& tau, const Eigen::VectorXd& sigma,
               const Eigen::VectorXd& epsilon, int max_iter, double tol) {
  const int big_n = w.countries;
  const int n = w.sectors;
  const int dim = big_n * n;
  const auto rate = [&](int d, int o, int y) {
    return tau[static_cast<std::size_t>((d * big_n + o) * n + y)];
  };

  Solution s;
  s.t = w.t0;
  s.dp = Eigen::VectorXd::Zero(dim);
  for (int it = 1; it <= max_iter; ++it) {
    // Shares at current producer prices.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
    for (int d = 0; d < big_n; ++d) {
      for (int y = 0; y < n; ++y) {
        const int col = d * n + y;
        double total = 0.0;
        for (int o = 0; o < big_n; ++o) {
          const double p = (1.0 + s.dp[o * n + y]) * (1.0 + rate(d, o, y));
          const double v = w.t0(o * n + y, col) * std::pow(p, 1.0 - sigma[y]);
          t(o * n + y, col) = v;
          total += v;
        }
        t.col(col) /= total;
      }
    }
    // Tariff cost on intermediates and the cost-push price dual.
    Eigen::VectorXd taxed = Eigen::VectorXd::Zero(dim);
    for (int d = 0; d < big_n; ++d) {
      for (int y = 0; y < n; ++y) {
        for (int o = 0; o < big_n; ++o) {
          if (o != d) taxed[d * n + y] += t(o * n + y, d * n + y) * rate(d, o, y);
        }
      }
    }
    const Eigen::VectorXd dpm = w.a.transpose() * taxed;
    const Eigen::MatrixXd ta = t * w.a;
    const Eigen::VectorXd dp = neumann(ta.transpose(), dpm);

    const double change = std::max((t - s.t).cwiseAbs().maxCoeff(),
                                   (dp - s.dp).cwiseAbs().maxCoeff());
    s.t = t;
    s.dp = dp;
    s.iterations = it;
    if (change <= tol) {
      s.converged = true;
      break;
    }
  }

  s.fd.resize(dim);
  for (int d = 0; d < big_n; ++d) {
    for (int y = 0; y < n; ++y) {
      double index = 0.0;
      for (int o = 0; o < big_n; ++o) {
        index += s.t(o * n + y, d * n + y) *
                 ((1.0 + s.dp[o * n + y]) * (1.0 + rate(d, o, y)) - 1.0);
      }
      s.fd[d * n + y] = w.fd0[d * n + y] * std::pow(1.0 + index, epsilon[y]);
    }
  }
  s.x = neumann(s.t * w.a, s.t * s.fd);
  return s;
}

}  // namespace oracle
