// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "risopt/errors.hpp"

namespace risopt {

/// Box bounds for the tunable load reactances [Ohm].
struct LoadBounds {
  double z_min = -1e4;
  double z_max = 1e4;

  void validate() const {
    if (!(z_min < z_max)) throw ConfigError("load bounds must satisfy z_min < z_max");
  }
};

/// Tunable RIS load: fixed common resistance r0 plus per-element reactance.
struct RisLoad {
  double r0 = 0.0;            // [Ohm], fixed real part
  Eigen::VectorXd x;          // [Ohm], tunable imaginary parts
  LoadBounds bounds;

  int n() const { return static_cast<int>(x.size()); }

  void validate() const {
    if (!(r0 >= 0.0)) throw ConfigError("load resistance r0 must be non-negative");
    bounds.validate();
    for (int s = 0; s < x.size(); ++s) {
      if (!(x[s] >= bounds.z_min && x[s] <= bounds.z_max)) {
        throw ConfigError("load reactance outside [z_min, z_max]");
      }
    }
  }

  /// The complex load vector r0 + j*x.
  Eigen::VectorXcd as_complex() const {
    Eigen::VectorXcd z(x.size());
    for (int s = 0; s < x.size(); ++s) z[s] = std::complex<double>(r0, x[s]);
    return z;
  }
};

}  // namespace risopt
