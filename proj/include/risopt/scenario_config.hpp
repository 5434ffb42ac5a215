// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "risopt/dipole.hpp"
#include "risopt/optimizer.hpp"
#include "risopt/toml.hpp"

namespace risopt {

/// Full run description. Defaults reproduce the reference setup: 3.5 GHz,
/// a 14x14 grid at quarter-wavelength spacing on the yz-plane, lambda/32
/// dipoles of radius lambda/500, TX at (10, -1, 0) m, RX at (10, 99, 0) m,
/// 50+50j Ohm terminations and a +-10 kOhm reactance box.
struct ScenarioConfig {
  double frequency_hz = 3.5e9;
  bool include_direct_link = false;

  // RIS grid: rows/cols, or aperture_m > 0 with rows = cols = 0
  int ris_rows = 14;
  int ris_cols = 14;
  double ris_aperture_m = 0.0;
  double ris_spacing_wl = 0.25;
  double element_length_wl = 1.0 / 32.0;
  double element_radius_wl = 1.0 / 500.0;
  bool length_equals_spacing = false;  // ties element length to the spacing

  Eigen::Vector3d tx_position_m{10.0, -1.0, 0.0};
  double tx_length_wl = 1.0 / 32.0;
  double tx_radius_wl = 1.0 / 500.0;
  Eigen::Vector3d rx_position_m{10.0, 99.0, 0.0};
  double rx_length_wl = 1.0 / 32.0;
  double rx_radius_wl = 1.0 / 500.0;

  std::complex<double> z_g{50.0, 50.0};
  std::complex<double> z_l{50.0, 50.0};

  double r0_ohm = 1e-3;
  LoadBounds bounds;

  OptimizerConfig optimizer;
  QuadratureOptions quadrature;

  std::vector<double> sweep_spacings_wl{0.5, 0.25, 0.125};

  std::string impedance_file;  // optional: bypass synthesis

  // benchmark-algorithm provenance; documented, unused by any computation
  double benchmark_m = 50.0;
  double benchmark_delta = 0.0039;

  double wavelength() const { return kSpeedOfLight / frequency_hz; }

  void validate() const {
    if (!(frequency_hz > 0.0)) throw ConfigError("frequency_hz must be positive");
    if (!(ris_spacing_wl > 0.0)) throw ConfigError("ris spacing must be positive");
    if (!(element_length_wl > 0.0) || !(element_radius_wl > 0.0)) {
      throw ConfigError("RIS element dimensions must be positive");
    }
    if (ris_rows <= 0 && ris_cols <= 0 && !(ris_aperture_m > 0.0)) {
      throw ConfigError("RIS grid needs rows/cols or a positive aperture_m");
    }
    if (!(tx_length_wl > 0.0) || !(tx_radius_wl > 0.0) || !(rx_length_wl > 0.0) ||
        !(rx_radius_wl > 0.0)) {
      throw ConfigError("TX/RX dipole dimensions must be positive");
    }
    if (!(r0_ohm >= 0.0)) throw ConfigError("r0_ohm must be non-negative");
    bounds.validate();
    optimizer.validate();
    for (double s : sweep_spacings_wl) {
      if (!(s > 0.0)) throw ConfigError("sweep spacings must be positive");
    }
  }

  /// Geometry for this config; an override replaces the grid spacing (and,
  /// with length_equals_spacing, the element length) for sweep points.
  ScenarioGeometry geometry(double spacing_override_wl = 0.0) const {
    const double lambda = wavelength();
    const double spacing_wl = spacing_override_wl > 0.0 ? spacing_override_wl : ris_spacing_wl;
    ScenarioGeometry geom;
    geom.wavelength = lambda;
    geom.grid.rows = ris_rows;
    geom.grid.cols = ris_cols;
    geom.grid.aperture_m = ris_aperture_m;
    geom.grid.spacing_m = spacing_wl * lambda;
    geom.grid.element_length_m =
        (length_equals_spacing ? spacing_wl : element_length_wl) * lambda;
    geom.grid.element_radius_m = element_radius_wl * lambda;
    geom.tx.center = tx_position_m;
    geom.tx.length = tx_length_wl * lambda;
    geom.tx.radius = tx_radius_wl * lambda;
    geom.rx.center = rx_position_m;
    geom.rx.length = rx_length_wl * lambda;
    geom.rx.radius = rx_radius_wl * lambda;
    geom.z_g = z_g;
    geom.z_l = z_l;
    return geom;
  }

  Scenario scenario(double spacing_override_wl = 0.0) const {
    return build_grid_scenario(geometry(spacing_override_wl));
  }

  Terminations terminations() const { return {z_g, z_l}; }

  friend bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
    auto vec3_eq = [](const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
      return u.x() == v.x() && u.y() == v.y() && u.z() == v.z();
    };
    return a.frequency_hz == b.frequency_hz &&
           a.include_direct_link == b.include_direct_link && a.ris_rows == b.ris_rows &&
           a.ris_cols == b.ris_cols && a.ris_aperture_m == b.ris_aperture_m &&
           a.ris_spacing_wl == b.ris_spacing_wl &&
           a.element_length_wl == b.element_length_wl &&
           a.element_radius_wl == b.element_radius_wl &&
           a.length_equals_spacing == b.length_equals_spacing &&
           vec3_eq(a.tx_position_m, b.tx_position_m) && a.tx_length_wl == b.tx_length_wl &&
           a.tx_radius_wl == b.tx_radius_wl && vec3_eq(a.rx_position_m, b.rx_position_m) &&
           a.rx_length_wl == b.rx_length_wl && a.rx_radius_wl == b.rx_radius_wl &&
           a.z_g == b.z_g && a.z_l == b.z_l && a.r0_ohm == b.r0_ohm &&
           a.bounds.z_min == b.bounds.z_min && a.bounds.z_max == b.bounds.z_max &&
           a.optimizer.mu_init == b.optimizer.mu_init &&
           a.optimizer.kappa == b.optimizer.kappa &&
           a.optimizer.reset_period == b.optimizer.reset_period &&
           a.optimizer.max_outer_iters == b.optimizer.max_outer_iters &&
           a.optimizer.plateau_tol == b.optimizer.plateau_tol &&
           a.optimizer.max_inner_loops == b.optimizer.max_inner_loops &&
           a.optimizer.coupling_aware == b.optimizer.coupling_aware &&
           a.quadrature.initial_nodes == b.quadrature.initial_nodes &&
           a.quadrature.max_nodes == b.quadrature.max_nodes &&
           a.quadrature.rel_tol == b.quadrature.rel_tol &&
           a.sweep_spacings_wl == b.sweep_spacings_wl &&
           a.impedance_file == b.impedance_file && a.benchmark_m == b.benchmark_m &&
           a.benchmark_delta == b.benchmark_delta;
  }
};

namespace detail {

inline void put_double(std::ostringstream& out, const char* key, double v) {
  out << key << " = " << toml::emit_value(toml::Value::of_float(v)) << "\n";
}

}  // namespace detail

inline std::string emit_config(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "[scenario]\n";
  detail::put_double(out, "frequency_hz", c.frequency_hz);
  out << "include_direct_link = " << (c.include_direct_link ? "true" : "false") << "\n";
  out << "\n[scenario.ris]\n";
  out << "rows = " << c.ris_rows << "\n";
  out << "cols = " << c.ris_cols << "\n";
  detail::put_double(out, "aperture_m", c.ris_aperture_m);
  detail::put_double(out, "spacing_wavelengths", c.ris_spacing_wl);
  detail::put_double(out, "element_length_wavelengths", c.element_length_wl);
  detail::put_double(out, "element_radius_wavelengths", c.element_radius_wl);
  out << "length_equals_spacing = " << (c.length_equals_spacing ? "true" : "false") << "\n";
  auto put_port = [&](const char* name, const Eigen::Vector3d& pos, double len, double rad) {
    out << "\n[scenario." << name << "]\n";
    out << "position_m = [" << toml::format_double(pos.x()) << ", "
        << toml::format_double(pos.y()) << ", " << toml::format_double(pos.z()) << "]\n";
    detail::put_double(out, "length_wavelengths", len);
    detail::put_double(out, "radius_wavelengths", rad);
  };
  put_port("tx", c.tx_position_m, c.tx_length_wl, c.tx_radius_wl);
  put_port("rx", c.rx_position_m, c.rx_length_wl, c.rx_radius_wl);
  out << "\n[terminations]\n";
  out << "z_g_ohm = [" << toml::format_double(c.z_g.real()) << ", "
      << toml::format_double(c.z_g.imag()) << "]\n";
  out << "z_l_ohm = [" << toml::format_double(c.z_l.real()) << ", "
      << toml::format_double(c.z_l.imag()) << "]\n";
  out << "\n[load]\n";
  detail::put_double(out, "r0_ohm", c.r0_ohm);
  out << "bounds_ohm = [" << toml::format_double(c.bounds.z_min) << ", "
      << toml::format_double(c.bounds.z_max) << "]\n";
  out << "\n[optimizer]\n";
  detail::put_double(out, "mu_init", c.optimizer.mu_init);
  detail::put_double(out, "kappa", c.optimizer.kappa);
  out << "reset_period = " << c.optimizer.reset_period << "\n";
  out << "max_outer_iters = " << c.optimizer.max_outer_iters << "\n";
  detail::put_double(out, "plateau_tol", c.optimizer.plateau_tol);
  out << "max_inner_loops = " << c.optimizer.max_inner_loops << "\n";
  out << "coupling_aware = " << (c.optimizer.coupling_aware ? "true" : "false") << "\n";
  out << "\n[quadrature]\n";
  out << "initial_nodes = " << c.quadrature.initial_nodes << "\n";
  out << "max_nodes = " << c.quadrature.max_nodes << "\n";
  detail::put_double(out, "rel_tol", c.quadrature.rel_tol);
  out << "\n[sweep]\n";
  out << "spacings_wavelengths = [";
  for (size_t i = 0; i < c.sweep_spacings_wl.size(); ++i) {
    if (i) out << ", ";
    out << toml::format_double(c.sweep_spacings_wl[i]);
  }
  out << "]\n";
  out << "\n[io]\n";
  out << "impedance_file = " << toml::emit_value(toml::Value::of_string(c.impedance_file))
      << "\n";
  out << "\n[benchmark]\n";
  detail::put_double(out, "m", c.benchmark_m);
  detail::put_double(out, "delta", c.benchmark_delta);
  return out.str();
}

inline ScenarioConfig parse_config(const std::string& text) {
  const toml::Table table = toml::parse(text);
  ScenarioConfig c;
  auto opt_double = [&](const std::string& key, double& target) {
    if (const toml::Value* v = toml::find(table, key)) target = v->as_double(key);
  };
  auto opt_int = [&](const std::string& key, auto& target) {
    if (const toml::Value* v = toml::find(table, key)) {
      target = static_cast<std::remove_reference_t<decltype(target)>>(v->as_int(key));
    }
  };
  auto opt_bool = [&](const std::string& key, bool& target) {
    if (const toml::Value* v = toml::find(table, key)) target = v->as_bool(key);
  };
  auto opt_pair = [&](const std::string& key, auto&& set) {
    if (const toml::Value* v = toml::find(table, key)) {
      const std::vector<double> arr = v->as_double_array(key);
      if (arr.size() != 2) throw ConfigError("config key '" + key + "' must be [a, b]");
      set(arr[0], arr[1]);
    }
  };
  auto opt_vec3 = [&](const std::string& key, Eigen::Vector3d& target) {
    if (const toml::Value* v = toml::find(table, key)) {
      const std::vector<double> arr = v->as_double_array(key);
      if (arr.size() != 3) throw ConfigError("config key '" + key + "' must be [x, y, z]");
      target = Eigen::Vector3d(arr[0], arr[1], arr[2]);
    }
  };

  opt_double("scenario.frequency_hz", c.frequency_hz);
  opt_bool("scenario.include_direct_link", c.include_direct_link);
  opt_int("scenario.ris.rows", c.ris_rows);
  opt_int("scenario.ris.cols", c.ris_cols);
  opt_double("scenario.ris.aperture_m", c.ris_aperture_m);
  opt_double("scenario.ris.spacing_wavelengths", c.ris_spacing_wl);
  opt_double("scenario.ris.element_length_wavelengths", c.element_length_wl);
  opt_double("scenario.ris.element_radius_wavelengths", c.element_radius_wl);
  opt_bool("scenario.ris.length_equals_spacing", c.length_equals_spacing);
  opt_vec3("scenario.tx.position_m", c.tx_position_m);
  opt_double("scenario.tx.length_wavelengths", c.tx_length_wl);
  opt_double("scenario.tx.radius_wavelengths", c.tx_radius_wl);
  opt_vec3("scenario.rx.position_m", c.rx_position_m);
  opt_double("scenario.rx.length_wavelengths", c.rx_length_wl);
  opt_double("scenario.rx.radius_wavelengths", c.rx_radius_wl);
  opt_pair("terminations.z_g_ohm", [&](double re, double im) { c.z_g = {re, im}; });
  opt_pair("terminations.z_l_ohm", [&](double re, double im) { c.z_l = {re, im}; });
  opt_double("load.r0_ohm", c.r0_ohm);
  opt_pair("load.bounds_ohm", [&](double lo, double hi) {
    c.bounds.z_min = lo;
    c.bounds.z_max = hi;
  });
  opt_double("optimizer.mu_init", c.optimizer.mu_init);
  opt_double("optimizer.kappa", c.optimizer.kappa);
  opt_int("optimizer.reset_period", c.optimizer.reset_period);
  opt_int("optimizer.max_outer_iters", c.optimizer.max_outer_iters);
  opt_double("optimizer.plateau_tol", c.optimizer.plateau_tol);
  opt_int("optimizer.max_inner_loops", c.optimizer.max_inner_loops);
  opt_bool("optimizer.coupling_aware", c.optimizer.coupling_aware);
  opt_int("quadrature.initial_nodes", c.quadrature.initial_nodes);
  opt_int("quadrature.max_nodes", c.quadrature.max_nodes);
  opt_double("quadrature.rel_tol", c.quadrature.rel_tol);
  if (const toml::Value* v = toml::find(table, "sweep.spacings_wavelengths")) {
    c.sweep_spacings_wl = v->as_double_array("sweep.spacings_wavelengths");
  }
  if (const toml::Value* v = toml::find(table, "io.impedance_file")) {
    c.impedance_file = v->as_string("io.impedance_file");
  }
  opt_double("benchmark.m", c.benchmark_m);
  opt_double("benchmark.delta", c.benchmark_delta);
  c.validate();
  return c;
}

}  // namespace risopt
