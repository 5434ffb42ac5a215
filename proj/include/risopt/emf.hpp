// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>

#include "risopt/constants.hpp"
#include "risopt/dipole.hpp"
#include "risopt/quadrature.hpp"

namespace risopt {

namespace detail {

// Induced-EMF mutual impedance between parallel z-directed dipoles with
// sinusoidal current. The source dipole's kernel
//   e^{-jkR1}/R1 + e^{-jkR2}/R2 - 2 cos(k h_src) e^{-jkR0}/R0
// is integrated against the observation dipole's current
//   sin(k (h_obs - |zeta|)),
// where R0, R1, R2 run from the observation point to the source center and
// end points at transverse offset rho, and axial_offset is the z distance
// between the two centers. Referred to the terminal currents via
// 1 / (sin(k h_src) sin(k h_obs)).
inline std::complex<double> emf_integral(double h_src, double h_obs, double rho,
                                         double axial_offset, double wavelength,
                                         const QuadratureOptions& opts) {
  const double k = 2.0 * kPi / wavelength;
  const double cos_khs = std::cos(k * h_src);
  auto kernel = [&](double zeta) {
    const double d = zeta + axial_offset;  // axial distance to source center
    const double r0 = std::hypot(rho, d);
    const double r1 = std::hypot(rho, d - h_src);
    const double r2 = std::hypot(rho, d + h_src);
    const std::complex<double> field =
        std::exp(-kJ * (k * r1)) / r1 + std::exp(-kJ * (k * r2)) / r2 -
        2.0 * cos_khs * std::exp(-kJ * (k * r0)) / r0;
    return field * std::sin(k * (h_obs - std::abs(zeta)));
  };
  // split at zeta = 0: the current distribution has a kink there
  const QuadratureResult q =
      integrate_adaptive(kernel, {{-h_obs, 0.0}, {0.0, h_obs}}, opts);
  const std::complex<double> scale =
      kJ * kEta0 / (4.0 * kPi * std::sin(k * h_src) * std::sin(k * h_obs));
  return scale * q.value;
}

}  // namespace detail

/// Mutual impedance z_qp between two parallel z-directed dipoles [Ohm].
///
/// For coincident axes (self term or stacked collinear elements) the
/// transverse offset is regularized to the source wire radius.
inline std::complex<double> mutual_impedance(const Dipole& p, const Dipole& q,
                                             double wavelength,
                                             const QuadratureOptions& opts = {}) {
  if (!(wavelength > 0.0)) throw GeometryError("wavelength must be positive");
  p.validate();
  q.validate();
  const double dx = q.center.x() - p.center.x();
  const double dy = q.center.y() - p.center.y();
  double rho = std::hypot(dx, dy);
  if (rho == 0.0) rho = p.radius;  // thin-wire surface regularization
  const double axial_offset = q.center.z() - p.center.z();
  return detail::emf_integral(0.5 * p.length, 0.5 * q.length, rho, axial_offset,
                              wavelength, opts);
}

/// Self impedance of a dipole [Ohm]: the field integral evaluated on the
/// wire surface (transverse offset = radius).
inline std::complex<double> self_impedance(const Dipole& d, double wavelength,
                                           const QuadratureOptions& opts = {}) {
  if (!(wavelength > 0.0)) throw GeometryError("wavelength must be positive");
  d.validate();
  return detail::emf_integral(0.5 * d.length, 0.5 * d.length, d.radius, 0.0,
                              wavelength, opts);
}

}  // namespace risopt
