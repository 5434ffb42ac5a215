// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "risopt/constants.hpp"
#include "risopt/errors.hpp"

namespace risopt {

/// A thin-wire dipole parallel to the z-axis.
struct Dipole {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // [m]
  double length = 0.0;                                // [m]
  double radius = 0.0;                                // [m]

  void validate() const {
    if (!(length > 0.0)) throw GeometryError("dipole length must be positive");
    if (!(radius > 0.0)) throw GeometryError("dipole radius must be positive");
    if (!(radius < length / 10.0)) {
      throw GeometryError("thin-wire model requires radius < length/10");
    }
  }
};

/// TX dipole, RX dipole and RIS element dipoles plus terminations.
struct Scenario {
  Dipole tx;
  Dipole rx;
  std::vector<Dipole> ris_elements;  // row-major over the grid, y fastest
  double wavelength = 0.0;           // [m]
  std::complex<double> z_g{0.0, 0.0};
  std::complex<double> z_l{0.0, 0.0};

  double frequency_hz() const { return kSpeedOfLight / wavelength; }
  int n_ris() const { return static_cast<int>(ris_elements.size()); }

  void validate() const {
    if (!(wavelength > 0.0)) throw GeometryError("wavelength must be positive");
    if (ris_elements.empty()) throw GeometryError("scenario needs at least one RIS element");
    tx.validate();
    rx.validate();
    for (const Dipole& d : ris_elements) {
      d.validate();
      if (d.center.x() != 0.0) {
        throw GeometryError("RIS element centers must lie in the x=0 plane");
      }
    }
    // no two dipoles may share a center
    std::vector<const Dipole*> all;
    all.push_back(&tx);
    all.push_back(&rx);
    for (const Dipole& d : ris_elements) all.push_back(&d);
    for (size_t i = 0; i < all.size(); ++i) {
      for (size_t j = i + 1; j < all.size(); ++j) {
        if (all[i]->center == all[j]->center) {
          throw GeometryError("two dipoles share the same center");
        }
      }
    }
  }
};

/// Grid extent given either explicitly or as a fixed aperture.
struct GridSpec {
  int rows = 0;  // counted along z
  int cols = 0;  // counted along y
  double aperture_m = 0.0;        // alternative to rows/cols
  double spacing_m = 0.0;         // uniform in y and z
  double element_length_m = 0.0;
  double element_radius_m = 0.0;

  bool aperture_mode() const { return rows <= 0 || cols <= 0; }
};

/// Everything needed to construct a Scenario.
struct ScenarioGeometry {
  double wavelength = 0.0;
  GridSpec grid;
  Dipole tx;
  Dipole rx;
  std::complex<double> z_g{0.0, 0.0};
  std::complex<double> z_l{0.0, 0.0};
};

/// Builds the RIS grid on the yz-plane, centered at the origin.
///
/// Elements are ordered row-major with y fastest: index s = r*cols + c where
/// r walks z from -extent/2 upward and c walks y from -extent/2 upward. In
/// aperture mode the per-side count is round(aperture / spacing).
inline Scenario build_grid_scenario(const ScenarioGeometry& geom) {
  if (!(geom.wavelength > 0.0)) throw GeometryError("wavelength must be positive");
  if (!(geom.grid.spacing_m > 0.0)) throw GeometryError("grid spacing must be positive");

  int rows = geom.grid.rows;
  int cols = geom.grid.cols;
  if (geom.grid.aperture_mode()) {
    if (!(geom.grid.aperture_m > 0.0)) {
      throw GeometryError("grid needs rows/cols or a positive aperture");
    }
    const int per_side =
        static_cast<int>(std::lround(geom.grid.aperture_m / geom.grid.spacing_m));
    if (per_side < 1) throw GeometryError("aperture smaller than one element spacing");
    rows = cols = per_side;
  }
  if (rows < 1 || cols < 1) throw GeometryError("grid must have at least one element");

  // same-column neighbors along z may touch but not overlap
  if (rows > 1 && geom.grid.element_length_m > geom.grid.spacing_m * (1.0 + 1e-12)) {
    throw GeometryError("RIS elements overlap along z: element length " +
                        std::to_string(geom.grid.element_length_m) +
                        " m exceeds spacing " + std::to_string(geom.grid.spacing_m) + " m");
  }

  Scenario s;
  s.wavelength = geom.wavelength;
  s.tx = geom.tx;
  s.rx = geom.rx;
  s.z_g = geom.z_g;
  s.z_l = geom.z_l;
  s.ris_elements.reserve(static_cast<size_t>(rows) * cols);
  const double y0 = -0.5 * (cols - 1) * geom.grid.spacing_m;
  const double z0 = -0.5 * (rows - 1) * geom.grid.spacing_m;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Dipole d;
      d.center = Eigen::Vector3d(0.0, y0 + c * geom.grid.spacing_m,
                                 z0 + r * geom.grid.spacing_m);
      d.length = geom.grid.element_length_m;
      d.radius = geom.grid.element_radius_m;
      s.ris_elements.push_back(d);
    }
  }
  s.validate();
  return s;
}

}  // namespace risopt
