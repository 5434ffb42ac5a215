// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "risopt/channel.hpp"

namespace risopt {

/// Gradient of the received power with respect to the load reactances.
struct GradientEval {
  Eigen::VectorXcd e_diag;  // diag(E)
  Eigen::VectorXd grad;     // 2 Im(h_E2E * conj(e_diag)), purely real
};

/// diag(E) for E = z_L a Z^{-1} ((2 a phi^2 + 1) z_SR z_TS
///                - a phi z~_R z_ST z_TS - a phi z~_T z_SR z_RS) Z^{-1}
/// with Z = Z_SE, computed without materializing any N x N outer product:
/// each sandwiched rank-one term Z^{-1} (col row) Z^{-1} has diagonal
/// (Z^{-1} col) o (Z^{-T} row^T). Cost O(N^2) given the factorization.
inline Eigen::VectorXcd e_diagonal(const ChannelEval& ceval, const ImpedanceSet& iset,
                                   MultCounter* counter = nullptr) {
  const ZseFactorization& zse = *ceval.z_se;
  const int nn = zse.n();
  const Eigen::VectorXcd& v = ceval.zse_inv_z_sr;                    // Z^{-1} z_SR
  const Eigen::VectorXcd& p = ceval.zse_inv_z_st;                    // Z^{-1} z_ST
  const Eigen::VectorXcd u = zse.solve_transposed(iset.z_ts.transpose(), counter);
  const Eigen::VectorXcd q = zse.solve_transposed(iset.z_rs.transpose(), counter);

  const std::complex<double> a = ceval.a;
  const std::complex<double> phi = ceval.phi_tr;
  const std::complex<double> c_vu = 2.0 * a * phi * phi + 1.0;
  const std::complex<double> c_pu = -a * phi * ceval.z_tilde_r;
  const std::complex<double> c_vq = -a * phi * ceval.z_tilde_t;
  if (counter) {
    counter->add(CountPhase::kGradient,
                 3 * kernel_cost::cwise(nn) + 4 * kernel_cost::scale(nn) + 8);
  }
  return ceval.z_l * a *
         (c_vu * v.cwiseProduct(u) + c_pu * p.cwiseProduct(u) + c_vq * v.cwiseProduct(q));
}

/// Exact gradient of |h_E2E|^2 with respect to the load reactances:
/// grad = 2 Im(h_E2E vect_d(E^*)).
inline GradientEval gradient(const ChannelEval& ceval, const ImpedanceSet& iset,
                             MultCounter* counter = nullptr) {
  GradientEval g;
  g.e_diag = e_diagonal(ceval, iset, counter);
  const int nn = static_cast<int>(g.e_diag.size());
  if (counter) counter->add(CountPhase::kGradient, kernel_cost::cwise(nn));
  g.grad = 2.0 * (ceval.h_e2e * g.e_diag.conjugate()).imag();
  return g;
}

}  // namespace risopt
