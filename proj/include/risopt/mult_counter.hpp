// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace risopt {

/// Phases a complex multiplication can be attributed to.
enum class CountPhase { kFactorization, kSolves, kGradient, kObjective };

/// Running tally of complex multiplications, by kernel accounting.
///
/// Counting convention (fixed so that counts are reproducible across
/// implementations):
///   - n x n LU factorization        : n^3 / 3   (integer division)
///   - full factored solve (L then U): n^2       (two triangular solves)
///   - dot product of length n       : n
///   - elementwise product, length n : n
///   - scalar * vector, length n     : n
/// Real-by-real multiplications (projection, step update, the quadratic
/// model) are not complex multiplications and are not counted.
struct MultCounter {
  std::uint64_t factorization = 0;
  std::uint64_t solves = 0;
  std::uint64_t gradient = 0;
  std::uint64_t objective = 0;

  void add(CountPhase phase, std::uint64_t n) {
    switch (phase) {
      case CountPhase::kFactorization: factorization += n; break;
      case CountPhase::kSolves: solves += n; break;
      case CountPhase::kGradient: gradient += n; break;
      case CountPhase::kObjective: objective += n; break;
    }
  }

  std::uint64_t total() const {
    return factorization + solves + gradient + objective;
  }
};

namespace kernel_cost {

inline std::uint64_t factorization(std::uint64_t n) { return n * n * n / 3; }
inline std::uint64_t solve(std::uint64_t n) { return n * n; }
inline std::uint64_t dot(std::uint64_t n) { return n; }
inline std::uint64_t cwise(std::uint64_t n) { return n; }
inline std::uint64_t scale(std::uint64_t n) { return n; }

}  // namespace kernel_cost

}  // namespace risopt
