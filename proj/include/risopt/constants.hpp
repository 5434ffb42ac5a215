// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <numbers>

namespace risopt {

inline constexpr double kPi = std::numbers::pi;

/// Speed of light in vacuum [m/s].
inline constexpr double kSpeedOfLight = 299792458.0;

/// Free-space wave impedance [Ohm].
inline constexpr double kEta0 = 376.730313668;

inline constexpr std::complex<double> kJ{0.0, 1.0};

}  // namespace risopt
