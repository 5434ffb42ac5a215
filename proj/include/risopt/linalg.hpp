// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>

#include "risopt/errors.hpp"
#include "risopt/mult_counter.hpp"
#include "risopt/ris_load.hpp"

namespace risopt {

/// LU factorization of Z_SE = Z_SS + diag(r0 + j x), reused for every solve
/// against the same load vector. The explicit inverse is never formed.
class ZseFactorization {
 public:
  ZseFactorization(const Eigen::MatrixXcd& z_ss, const RisLoad& load,
                   MultCounter* counter = nullptr) {
    const int nn = static_cast<int>(z_ss.rows());
    if (z_ss.cols() != nn || load.n() != nn) {
      throw ConfigError("Z_SS and load dimensions disagree");
    }
    Eigen::MatrixXcd z_se = z_ss;
    for (int s = 0; s < nn; ++s) {
      z_se(s, s) += std::complex<double>(load.r0, load.x[s]);
    }
    lu_.compute(z_se);
    if (counter) counter->add(CountPhase::kFactorization, kernel_cost::factorization(nn));

    double min_piv = std::numeric_limits<double>::infinity();
    double max_piv = 0.0;
    for (int s = 0; s < nn; ++s) {
      const double piv = std::abs(lu_.matrixLU()(s, s));
      min_piv = std::min(min_piv, piv);
      max_piv = std::max(max_piv, piv);
    }
    if (min_piv == 0.0) throw SingularMatrixError("Z_SE is exactly singular");
    cond_estimate_ = max_piv / min_piv;
  }

  int n() const { return static_cast<int>(lu_.rows()); }

  /// Pivot-ratio condition estimate (cheap; a lower bound on kappa_2).
  double cond_estimate() const { return cond_estimate_; }
  bool near_singular() const { return cond_estimate_ > 1e14; }

  /// Z_SE^{-1} b.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& b, MultCounter* counter = nullptr) const {
    if (counter) counter->add(CountPhase::kSolves, kernel_cost::solve(n()));
    return lu_.solve(b);
  }

  /// Z_SE^{-T} b, i.e. the left application (row * Z_SE^{-1}) transposed.
  Eigen::VectorXcd solve_transposed(const Eigen::VectorXcd& b,
                                    MultCounter* counter = nullptr) const {
    if (counter) counter->add(CountPhase::kSolves, kernel_cost::solve(n()));
    return lu_.transpose().solve(b);
  }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double cond_estimate_ = 0.0;
};

}  // namespace risopt
