// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <memory>

#include "risopt/impedance_set.hpp"
#include "risopt/linalg.hpp"
#include "risopt/mult_counter.hpp"
#include "risopt/ris_load.hpp"

namespace risopt {

/// Generator and load terminations of the TX/RX ports [Ohm].
struct Terminations {
  std::complex<double> z_g{0.0, 0.0};
  std::complex<double> z_l{0.0, 0.0};
};

enum class Port { T, R };

/// One full evaluation of the channel at a given load. Immutable; the
/// factorization and the two forward solves are kept for gradient reuse.
struct ChannelEval {
  std::shared_ptr<const ZseFactorization> z_se;
  std::complex<double> phi_tt{0.0, 0.0};
  std::complex<double> phi_rr{0.0, 0.0};
  std::complex<double> phi_tr{0.0, 0.0};
  std::complex<double> z_tilde_t{0.0, 0.0};  // z_g + phi_tt
  std::complex<double> z_tilde_r{0.0, 0.0};  // z_l + phi_rr
  std::complex<double> a{0.0, 0.0};          // 1 / (z_tilde_t z_tilde_r - phi_tr^2)
  std::complex<double> h_e2e{0.0, 0.0};
  double objective = 0.0;                    // |h_e2e|^2
  std::complex<double> z_l{0.0, 0.0};
  bool near_singular = false;

  // solve results reused by the gradient
  Eigen::VectorXcd zse_inv_z_st;  // Z_SE^{-1} z_ST
  Eigen::VectorXcd zse_inv_z_sr;  // Z_SE^{-1} z_SR
};

/// Factorizes Z_SE = Z_SS + diag(r0 + j x) for the given load.
inline std::shared_ptr<const ZseFactorization> z_se(const ImpedanceSet& iset,
                                                    const RisLoad& load,
                                                    MultCounter* counter = nullptr) {
  return std::make_shared<const ZseFactorization>(iset.z_ss, load, counter);
}

/// Coupled-port scalar phi_KL = z_KL - z_KS Z_SE^{-1} z_SL.
inline std::complex<double> phi(const ImpedanceSet& iset, const ZseFactorization& zse,
                                Port k, Port l, MultCounter* counter = nullptr) {
  const Eigen::RowVectorXcd& z_ks = (k == Port::T) ? iset.z_ts : iset.z_rs;
  const Eigen::VectorXcd z_sl = (l == Port::T) ? iset.z_st() : iset.z_sr();
  std::complex<double> z_kl;
  if (k == l) {
    z_kl = (k == Port::T) ? iset.z_tt : iset.z_rr;
  } else {
    z_kl = iset.z_tr;
  }
  const Eigen::VectorXcd sol = zse.solve(z_sl, counter);
  if (counter) counter->add(CountPhase::kObjective, kernel_cost::dot(zse.n()));
  return z_kl - (z_ks * sol)(0);
}

/// Evaluates the end-to-end transfer function h_E2E = z_L phi_TR / (z~_T z~_R
/// - phi_TR^2) and the received-power objective |h_E2E|^2.
///
/// A near-singular Z_SE only flags the result; an exactly zero denominator
/// throws DegenerateChannelError.
inline ChannelEval transfer_function(const ImpedanceSet& iset, const RisLoad& load,
                                     const Terminations& term,
                                     MultCounter* counter = nullptr) {
  load.validate();
  ChannelEval ev;
  ev.z_l = term.z_l;
  ev.z_se = z_se(iset, load, counter);
  ev.near_singular = ev.z_se->near_singular();

  ev.zse_inv_z_st = ev.z_se->solve(iset.z_st(), counter);
  ev.zse_inv_z_sr = ev.z_se->solve(iset.z_sr(), counter);
  const int nn = ev.z_se->n();
  if (counter) counter->add(CountPhase::kObjective, 3 * kernel_cost::dot(nn));
  ev.phi_tt = iset.z_tt - (iset.z_ts * ev.zse_inv_z_st)(0);
  ev.phi_tr = iset.z_tr - (iset.z_ts * ev.zse_inv_z_sr)(0);
  ev.phi_rr = iset.z_rr - (iset.z_rs * ev.zse_inv_z_sr)(0);

  ev.z_tilde_t = term.z_g + ev.phi_tt;
  ev.z_tilde_r = term.z_l + ev.phi_rr;
  const std::complex<double> den = ev.z_tilde_t * ev.z_tilde_r - ev.phi_tr * ev.phi_tr;
  if (den == std::complex<double>(0.0, 0.0)) {
    throw DegenerateChannelError("transfer-function denominator is zero");
  }
  ev.a = 1.0 / den;
  ev.h_e2e = term.z_l * ev.phi_tr * ev.a;
  ev.objective = std::norm(ev.h_e2e);
  if (counter) counter->add(CountPhase::kObjective, 8);  // scalar tail
  return ev;
}

/// Approximate transfer function h_E2E,APP = Y0 phi_RT with
/// Y0 = z_L (z_L + z_RR)^{-1} (z_G + z_TT)^{-1}.
inline std::complex<double> approx_transfer_function(const ImpedanceSet& iset,
                                                     const RisLoad& load,
                                                     const Terminations& term,
                                                     MultCounter* counter = nullptr) {
  load.validate();
  const std::complex<double> den_r = term.z_l + iset.z_rr;
  const std::complex<double> den_t = term.z_g + iset.z_tt;
  if (den_r == std::complex<double>(0.0, 0.0) ||
      den_t == std::complex<double>(0.0, 0.0)) {
    throw DegenerateChannelError("approximate transfer function is degenerate");
  }
  const auto fact = z_se(iset, load, counter);
  const Eigen::VectorXcd sol = fact->solve(iset.z_st(), counter);
  if (counter) counter->add(CountPhase::kObjective, kernel_cost::dot(fact->n()) + 4);
  const std::complex<double> phi_rt = iset.z_rt() - (iset.z_rs * sol)(0);
  return term.z_l / (den_r * den_t) * phi_rt;
}

}  // namespace risopt
