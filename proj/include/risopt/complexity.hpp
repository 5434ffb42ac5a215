// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risopt/optimizer.hpp"

namespace risopt {

/// Closed-form complexity estimate of the proposed method:
/// C_P = I (3 N^3 + L (N^3 + N^2)) complex multiplications, where L is the
/// effective number of line-search passes per iteration.
inline double complexity_proposed(long long n_ris, long long iterations, double l) {
  const double n3 = static_cast<double>(n_ris) * n_ris * n_ris;
  const double n2 = static_cast<double>(n_ris) * n_ris;
  return static_cast<double>(iterations) * (3.0 * n3 + l * (n3 + n2));
}

/// Closed-form complexity estimate of the benchmark method:
/// C_B = I (N^3 + N^2).
inline double complexity_benchmark(long long n_ris, long long iterations) {
  const double n3 = static_cast<double>(n_ris) * n_ris * n_ris;
  const double n2 = static_cast<double>(n_ris) * n_ris;
  return static_cast<double>(iterations) * (n3 + n2);
}

/// Instrumented optimization run: the result together with the kernel-level
/// multiplication tally.
inline std::pair<OptimizeResult, MultCounter> counted_run(const ImpedanceSet& iset,
                                                          const Terminations& term,
                                                          const RisLoad& init,
                                                          const OptimizerConfig& cfg) {
  OptimizeResult result = optimize(iset, term, init, cfg);
  MultCounter counter = result.counter;
  return {std::move(result), counter};
}

}  // namespace risopt
