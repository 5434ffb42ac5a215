// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "risopt/channel.hpp"
#include "risopt/gradient.hpp"
#include "risopt/impedance_set.hpp"
#include "risopt/mult_counter.hpp"
#include "risopt/ris_load.hpp"

namespace risopt {

struct OptimizerConfig {
  double mu_init = 1e25;
  double kappa = 0.5;
  long long reset_period = 1000;
  long long max_outer_iters = 1000000;
  double plateau_tol = 1e-9;
  int max_inner_loops = 200;
  bool coupling_aware = true;

  void validate() const {
    if (!(mu_init > 0.0)) throw ConfigError("mu_init must be positive");
    if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("kappa must lie in (0, 1)");
    if (reset_period < 1) throw ConfigError("reset_period must be at least 1");
    if (max_outer_iters < 1) throw ConfigError("max_outer_iters must be at least 1");
    if (!(plateau_tol >= 0.0)) throw ConfigError("plateau_tol must be non-negative");
    if (max_inner_loops < 1) throw ConfigError("max_inner_loops must be at least 1");
  }
};

struct TraceRow {
  long long iter = 0;
  double objective = 0.0;
  double mu = 0.0;
  int inner_loops = 0;
  std::uint64_t cum_mults = 0;
};

/// Per-iteration record of one optimization run.
struct ConvergenceTrace {
  std::vector<TraceRow> rows;

  /// CSV with fixed header; reals at 17 significant digits.
  void write_csv(std::ostream& out) const {
    out << "iter,objective,mu,inner_loops,cum_mults\n";
    char buf[128];
    for (const TraceRow& r : rows) {
      std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%d,%llu\n",
                    static_cast<long long>(r.iter), r.objective, r.mu, r.inner_loops,
                    static_cast<unsigned long long>(r.cum_mults));
      out << buf;
    }
  }

  double final_objective() const { return rows.empty() ? 0.0 : rows.back().objective; }

  /// First iteration whose objective reaches the given fraction of the final.
  long long iters_to_fraction(double fraction) const {
    const double target = fraction * final_objective();
    for (const TraceRow& r : rows) {
      if (r.objective >= target) return r.iter;
    }
    return rows.empty() ? 0 : rows.back().iter;
  }

  /// Mean inner-loop count over iterations that performed a line search.
  double mean_inner_loops() const {
    double sum = 0.0;
    long long count = 0;
    for (const TraceRow& r : rows) {
      if (r.iter == 0) continue;
      sum += r.inner_loops;
      ++count;
    }
    return count > 0 ? sum / count : 0.0;
  }
};

/// Componentwise clamp onto [z_min, z_max]; idempotent.
inline Eigen::VectorXd project(const Eigen::VectorXd& x, const LoadBounds& bounds) {
  bounds.validate();
  return x.cwiseMax(bounds.z_min).cwiseMin(bounds.z_max);
}

/// Quadratic surrogate Q_mu(trial; x_n) = f_n + <grad, d> - ||d||^2 / (2 mu)
/// with d = trial - x_n and <x, y> = x^T y.
inline double quadratic_model(double f_n, const Eigen::VectorXd& grad,
                              const Eigen::VectorXd& x_trial, const Eigen::VectorXd& x_n,
                              double mu) {
  const Eigen::VectorXd d = x_trial - x_n;
  return f_n + grad.dot(d) - d.squaredNorm() / (2.0 * mu);
}

struct OptimizerState {
  RisLoad iterate;
  double mu = 0.0;
  long long n = 0;
  double objective = 0.0;
  ConvergenceTrace trace;

  ChannelEval eval;    // at iterate
  GradientEval grad;   // at iterate
  MultCounter counter;

  // |phi_TR| <= ||z_TS|| ||z_SR|| / R0 diagnostic, tracked but never enforced
  double phi_bound_ratio_max = 0.0;
  bool phi_bound_exceeded = false;
};

namespace detail {

inline void record_phi_bound(OptimizerState& state, const ImpedanceSet& iset) {
  if (!(state.iterate.r0 > 0.0)) return;
  const double denom = iset.z_ts.norm() * iset.z_rs.norm();
  if (denom == 0.0) return;
  const double ratio = std::abs(state.eval.phi_tr) * state.iterate.r0 / denom;
  state.phi_bound_ratio_max = std::max(state.phi_bound_ratio_max, ratio);
  if (ratio > 1.0) state.phi_bound_exceeded = true;
}

}  // namespace detail

/// Initial state at a feasible load: evaluates the channel and the gradient.
inline OptimizerState init_state(const ImpedanceSet& iset, const Terminations& term,
                                 const RisLoad& init, const OptimizerConfig& cfg) {
  cfg.validate();
  init.validate();
  OptimizerState state;
  state.iterate = init;
  state.mu = cfg.mu_init;
  state.eval = transfer_function(iset, init, term, &state.counter);
  state.objective = state.eval.objective;
  state.grad = gradient(state.eval, iset, &state.counter);
  detail::record_phi_bound(state, iset);
  state.trace.rows.push_back({0, state.objective, state.mu, 0, state.counter.total()});
  return state;
}

/// One outer iteration: backtracking until the quadratic minorant holds,
/// then commit the accepted iterate. A trial whose evaluation fails or is
/// non-finite counts as a failed minorant test (mu shrinks).
inline void line_search_step(OptimizerState& state, const ImpedanceSet& iset,
                             const Terminations& term, const OptimizerConfig& cfg) {
  const Eigen::VectorXd& g = state.grad.grad;
  int inner = 0;
  double last_trial_objective = std::numeric_limits<double>::quiet_NaN();
  while (true) {
    if (inner >= cfg.max_inner_loops) {
      throw StallError("line search exhausted max_inner_loops", state.n + 1, state.mu,
                       state.objective, last_trial_objective);
    }
    ++inner;
    RisLoad trial = state.iterate;
    trial.x = project(state.iterate.x + state.mu * g, state.iterate.bounds);
    bool ok = true;
    ChannelEval trial_eval;
    try {
      trial_eval = transfer_function(iset, trial, term, &state.counter);
    } catch (const SingularMatrixError&) {
      ok = false;
    } catch (const DegenerateChannelError&) {
      ok = false;
    }
    if (ok && !std::isfinite(trial_eval.objective)) ok = false;
    if (ok) {
      last_trial_objective = trial_eval.objective;
      const double q = quadratic_model(state.objective, g, trial.x, state.iterate.x,
                                       state.mu);
      // the second clause guards monotonicity against rounding in q
      if (trial_eval.objective >= q && trial_eval.objective >= state.objective) {
        state.iterate = trial;
        state.eval = std::move(trial_eval);
        state.objective = state.eval.objective;
        state.grad = gradient(state.eval, iset, &state.counter);
        detail::record_phi_bound(state, iset);
        state.n += 1;
        state.trace.rows.push_back(
            {state.n, state.objective, state.mu, inner, state.counter.total()});
        return;
      }
    }
    state.mu *= cfg.kappa;
  }
}

enum class StopReason { kMaxIterations, kPlateau };

struct OptimizeResult {
  RisLoad load;
  ConvergenceTrace trace;
  MultCounter counter;
  double objective = 0.0;
  StopReason stop_reason = StopReason::kMaxIterations;
  double phi_bound_ratio_max = 0.0;
  bool phi_bound_exceeded = false;
};

/// Projected gradient ascent with backtracking line search and periodic
/// step-size reset. Stops at max_outer_iters or when the relative objective
/// improvement over the last reset_period iterations falls below
/// plateau_tol. The trace objective is non-decreasing by construction.
inline OptimizeResult optimize(const ImpedanceSet& iset, const Terminations& term,
                               const RisLoad& init, const OptimizerConfig& cfg) {
  OptimizerState state = init_state(iset, term, init, cfg);
  StopReason reason = StopReason::kMaxIterations;
  while (state.n < cfg.max_outer_iters) {
    line_search_step(state, iset, term, cfg);
    if (state.n % cfg.reset_period == 0) state.mu = cfg.mu_init;
    const long long window = std::min(state.n, cfg.reset_period);
    const double past = state.trace.rows[static_cast<size_t>(state.n - window)].objective;
    const double rel_improve =
        (state.objective - past) / std::max(std::abs(past), 1e-300);
    if (rel_improve < cfg.plateau_tol) {
      reason = StopReason::kPlateau;
      break;
    }
  }
  OptimizeResult result;
  result.load = state.iterate;
  result.trace = std::move(state.trace);
  result.counter = state.counter;
  result.objective = state.objective;
  result.stop_reason = reason;
  result.phi_bound_ratio_max = state.phi_bound_ratio_max;
  result.phi_bound_exceeded = state.phi_bound_exceeded;
  return result;
}

/// Resonance initializer x(s) = -Im(Z_SS(s,s)), clamped into bounds.
inline RisLoad default_initializer(const ImpedanceSet& iset, double r0,
                                   const LoadBounds& bounds = {}) {
  RisLoad load;
  load.r0 = r0;
  load.bounds = bounds;
  load.x.resize(iset.n());
  for (int s = 0; s < iset.n(); ++s) load.x[s] = -iset.z_ss(s, s).imag();
  load.x = project(load.x, bounds);
  return load;
}

/// Copy with the off-diagonal of Z_SS zeroed: the model seen by a
/// coupling-unaware optimizer. Self terms and TX/RX rows are untouched.
inline ImpedanceSet unaware_counterpart(const ImpedanceSet& iset) {
  ImpedanceSet out = iset;
  out.z_ss = iset.z_ss.diagonal().asDiagonal();
  return out;
}

}  // namespace risopt
