// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace risopt {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration value or malformed config document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid dipole, scenario or grid geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Quadrature failed to converge within the node cap.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& msg, double residual)
      : Error(msg), residual_(residual) {}
  /// Relative change between the last two refinement levels.
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Malformed or inconsistent impedance file.
class FileFormatError : public Error {
 public:
  using Error::Error;
};

/// Z_SE is exactly singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// The transfer-function denominator evaluated to exactly zero.
class DegenerateChannelError : public Error {
 public:
  using Error::Error;
};

/// Line search exhausted max_inner_loops without an acceptable step.
class StallError : public Error {
 public:
  StallError(const std::string& msg, long long iteration, double mu,
             double current_objective, double last_trial_objective)
      : Error(msg),
        iteration_(iteration),
        mu_(mu),
        current_objective_(current_objective),
        last_trial_objective_(last_trial_objective) {}

  long long iteration() const { return iteration_; }
  double mu() const { return mu_; }
  double current_objective() const { return current_objective_; }
  double last_trial_objective() const { return last_trial_objective_; }

 private:
  long long iteration_;
  double mu_;
  double current_objective_;
  double last_trial_objective_;
};

}  // namespace risopt
