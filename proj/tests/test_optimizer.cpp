// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "oracle_helpers.hpp"
#include "risopt/complexity.hpp"
#include "risopt/optimizer.hpp"

using namespace risopt;
using oracle::Instance;
using Complex = std::complex<double>;

TEST_CASE("projection clamps componentwise and is idempotent") {
  LoadBounds bounds{-1e4, 1e4};
  Eigen::VectorXd x(3);
  x << 1.2e4, 0.0, -2e4;
  const Eigen::VectorXd p = project(x, bounds);
  CHECK(p[0] == 1e4);
  CHECK(p[1] == 0.0);
  CHECK(p[2] == -1e4);
  CHECK(project(p, bounds) == p);

  Eigen::VectorXd inside(2);
  inside << -3.0, 42.0;
  CHECK(project(inside, bounds) == inside);
}

TEST_CASE("quadratic model") {
  Eigen::VectorXd x(2), g(2);
  x << 1.0, -2.0;
  g << 0.5, 0.25;

  SECTION("zero displacement returns f_n") {
    CHECK(quadratic_model(3.5, g, x, x, 10.0) == 3.5);
  }
  SECTION("zero gradient leaves only the penalty") {
    Eigen::VectorXd trial(2);
    trial << 2.0, -2.0;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    const double q = quadratic_model(3.5, zero, trial, x, 2.0);
    CHECK(q == 3.5 - 1.0 / 4.0);
    CHECK(q < 3.5);
  }
  SECTION("random instance matches term-by-term evaluation") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial_i = 0; trial_i < 20; ++trial_i) {
      Eigen::VectorXd xn(4), gr(4), xt(4);
      for (int i = 0; i < 4; ++i) {
        xn[i] = uni(rng);
        gr[i] = uni(rng);
        xt[i] = uni(rng);
      }
      const double f_n = uni(rng);
      const double mu = std::abs(uni(rng)) + 0.1;
      double expected = f_n;
      double norm2 = 0.0;
      for (int i = 0; i < 4; ++i) {
        expected += gr[i] * (xt[i] - xn[i]);
        norm2 += (xt[i] - xn[i]) * (xt[i] - xn[i]);
      }
      expected -= norm2 / (2.0 * mu);
      CHECK(std::abs(quadratic_model(f_n, gr, xt, xn, mu) - expected) < 1e-14);
    }
  }
}

TEST_CASE("line search accepts immediately at a stationary point") {
  std::mt19937 rng(32);
  Instance inst = oracle::random_instance(3, rng);
  inst.iset.z_ts.setZero();
  inst.iset.z_rs.setZero();  // objective constant, gradient zero
  OptimizerConfig cfg;
  OptimizerState state = init_state(inst.iset, inst.term, inst.load, cfg);
  REQUIRE(state.grad.grad.norm() == 0.0);
  line_search_step(state, inst.iset, inst.term, cfg);
  CHECK(state.n == 1);
  CHECK(state.trace.rows.back().inner_loops == 1);
  CHECK(state.iterate.x == inst.load.x);
}

TEST_CASE("huge initial step halves mu finitely many times then accepts") {
  std::mt19937 rng(33);
  const Instance inst = oracle::random_instance(4, rng);
  OptimizerConfig cfg;
  cfg.mu_init = 1e25;
  OptimizerState state = init_state(inst.iset, inst.term, inst.load, cfg);
  const double f0 = state.objective;
  line_search_step(state, inst.iset, inst.term, cfg);
  CHECK(state.trace.rows.back().inner_loops >= 1);
  CHECK(state.trace.rows.back().inner_loops <= cfg.max_inner_loops);
  CHECK(state.objective >= f0);
  CHECK(state.mu < cfg.mu_init);  // at least one shrink with this landscape
}

TEST_CASE("every accepted step is monotone and feasible") {
  std::mt19937 rng(34);
  oracle::InstanceOptions opts;
  opts.r0 = 1e-2;
  const Instance inst = oracle::random_instance(5, rng, opts);
  OptimizerConfig cfg;
  cfg.max_outer_iters = 200;
  cfg.plateau_tol = 0.0;
  const OptimizeResult res = optimize(inst.iset, inst.term, inst.load, cfg);
  for (size_t i = 1; i < res.trace.rows.size(); ++i) {
    CHECK(res.trace.rows[i].objective >= res.trace.rows[i - 1].objective);
  }
  CHECK(res.load.r0 == inst.load.r0);
  for (int s = 0; s < res.load.n(); ++s) {
    CHECK(res.load.x[s] >= res.load.bounds.z_min);
    CHECK(res.load.x[s] <= res.load.bounds.z_max);
  }
}

TEST_CASE("stall raises with diagnostics when the inner loop is capped") {
  std::mt19937 rng(35);
  const Instance inst = oracle::random_instance(4, rng);
  OptimizerConfig cfg;
  cfg.max_inner_loops = 1;  // the huge first trial cannot be accepted
  cfg.mu_init = 1e25;
  OptimizerState state = init_state(inst.iset, inst.term, inst.load, cfg);
  bool threw = false;
  try {
    line_search_step(state, inst.iset, inst.term, cfg);
  } catch (const StallError& e) {
    threw = true;
    CHECK(e.iteration() == 1);
    CHECK(e.mu() > 0.0);
  }
  CHECK(threw);
}

TEST_CASE("scalar resonance is found to grid accuracy") {
  // N = 1: f peaks where the load reactance cancels Im(z_ss) + coupling shift
  std::mt19937 rng(36);
  for (int trial = 0; trial < 3; ++trial) {
    Instance inst = oracle::random_instance(1, rng);
    inst.load = default_initializer(inst.iset, 1.0, {-1e4, 1e4});
    OptimizerConfig cfg;
    cfg.max_outer_iters = 20000;
    cfg.plateau_tol = 1e-13;
    const OptimizeResult res = optimize(inst.iset, inst.term, inst.load, cfg);

    // 1e5-point grid oracle (the acceptance suite runs the 1e6-point version)
    double best = 0.0;
    RisLoad probe = inst.load;
    const int points = 100000;
    for (int i = 0; i < points; ++i) {
      probe.x[0] = -1e4 + 2e4 * static_cast<double>(i) / (points - 1);
      best = std::max(best,
                      transfer_function(inst.iset, probe, inst.term).objective);
    }
    CHECK(res.objective >= best * (1.0 - 1e-4));
  }
}

TEST_CASE("two-element instance beats a fine grid oracle") {
  std::mt19937 rng(37);
  oracle::InstanceOptions opts;
  opts.coupling_scale = 1.0;  // mutual terms below the self resistances
  Instance inst = oracle::random_instance(2, rng, opts);
  inst.load = default_initializer(inst.iset, 1.0, {-1e4, 1e4});
  OptimizerConfig cfg;
  cfg.max_outer_iters = 20000;
  cfg.plateau_tol = 1e-13;
  const OptimizeResult res = optimize(inst.iset, inst.term, inst.load, cfg);

  // 200x200 grid over a +-40 Ohm box around the returned point, then a
  // refined pass around the best grid cell
  auto grid_scan = [&](Eigen::Vector2d center, double half_width, int points) {
    double best = 0.0;
    Eigen::Vector2d arg = center;
    RisLoad probe = res.load;
    for (int i = 0; i < points; ++i) {
      for (int j = 0; j < points; ++j) {
        probe.x[0] = center[0] - half_width + 2.0 * half_width * i / (points - 1);
        probe.x[1] = center[1] - half_width + 2.0 * half_width * j / (points - 1);
        probe.x = project(probe.x, probe.bounds);
        const double f = transfer_function(inst.iset, probe, inst.term).objective;
        if (f > best) {
          best = f;
          arg = Eigen::Vector2d(probe.x[0], probe.x[1]);
        }
      }
    }
    return std::make_pair(best, arg);
  };
  const Eigen::Vector2d returned(res.load.x[0], res.load.x[1]);
  auto [coarse_best, coarse_arg] = grid_scan(returned, 40.0, 200);
  auto [fine_best, fine_arg] = grid_scan(coarse_arg, 0.5, 200);
  const double oracle_best = std::max(coarse_best, fine_best);
  CHECK(res.objective >= 0.999 * oracle_best);
}

TEST_CASE("corner start with inward gradient moves strictly inside") {
  std::mt19937 rng(38);
  Instance inst = oracle::random_instance(1, rng);
  // start at the lower corner; the resonance peak lies in the interior
  inst.load.x[0] = inst.load.bounds.z_min;
  OptimizerConfig cfg;
  OptimizerState state = init_state(inst.iset, inst.term, inst.load, cfg);
  REQUIRE(state.grad.grad[0] > 0.0);  // inward
  line_search_step(state, inst.iset, inst.term, cfg);
  CHECK(state.iterate.x[0] > inst.load.bounds.z_min);
}

TEST_CASE("default initializer cancels the diagonal reactance") {
  ImpedanceSet iset;
  iset.z_ss.resize(2, 2);
  iset.z_ss.setZero();
  iset.z_ss(0, 0) = Complex(0.0, 5.0);
  iset.z_ss(1, 1) = Complex(0.0, -3.0);
  iset.z_ts.setZero(2);
  iset.z_rs.setZero(2);

  const RisLoad load = default_initializer(iset, 0.1, {-1e4, 1e4});
  CHECK(load.x[0] == -5.0);
  CHECK(load.x[1] == 3.0);
  CHECK(load.r0 == 0.1);

  SECTION("all-real diagonal gives zero") {
    iset.z_ss(0, 0) = Complex(4.0, 0.0);
    iset.z_ss(1, 1) = Complex(2.0, 0.0);
    CHECK(default_initializer(iset, 0.1, {-1e4, 1e4}).x == Eigen::VectorXd::Zero(2));
  }
  SECTION("out-of-box targets are clamped") {
    iset.z_ss(0, 0) = Complex(0.0, -2e4);  // wants x = +2e4
    const RisLoad clamped = default_initializer(iset, 0.1, {-1e4, 1e4});
    CHECK(clamped.x[0] == 1e4);
  }
}

TEST_CASE("unaware counterpart zeroes exactly the off-diagonal") {
  std::mt19937 rng(39);
  const Instance inst = oracle::random_instance(4, rng);
  const ImpedanceSet unaware = unaware_counterpart(inst.iset);
  for (int p = 0; p < 4; ++p) {
    for (int q = 0; q < 4; ++q) {
      if (p == q) {
        CHECK(unaware.z_ss(p, q) == inst.iset.z_ss(p, q));
      } else {
        CHECK(unaware.z_ss(p, q) == Complex(0.0, 0.0));
      }
    }
  }
  CHECK(unaware.z_ts == inst.iset.z_ts);
  CHECK(unaware.z_rs == inst.iset.z_rs);

  // a diagonal model is a fixed point
  const ImpedanceSet again = unaware_counterpart(unaware);
  CHECK(again.z_ss == unaware.z_ss);
}

TEST_CASE("unaware pipeline: optimize decoupled, evaluate under full coupling") {
  std::mt19937 rng(40);
  oracle::InstanceOptions opts;
  opts.r0 = 0.5;
  const Instance inst = oracle::random_instance(4, rng, opts);
  const ImpedanceSet decoupled = unaware_counterpart(inst.iset);
  OptimizerConfig cfg;
  cfg.max_outer_iters = 2000;
  const RisLoad init = default_initializer(inst.iset, opts.r0, {-1e4, 1e4});
  const OptimizeResult res = optimize(decoupled, inst.term, init, cfg);
  const double model_objective = res.objective;
  const double true_objective = transfer_function(inst.iset, res.load, inst.term).objective;
  CHECK(model_objective > 0.0);
  CHECK(true_objective > 0.0);  // both numbers exist; the gap is scenario-specific
}

TEST_CASE("plateau_tol = infinity stops after the first iteration") {
  std::mt19937 rng(41);
  const Instance inst = oracle::random_instance(3, rng);
  OptimizerConfig cfg;
  cfg.plateau_tol = std::numeric_limits<double>::infinity();
  const OptimizeResult res = optimize(inst.iset, inst.term, inst.load, cfg);
  CHECK(res.trace.rows.back().iter == 1);
  CHECK(res.stop_reason == StopReason::kPlateau);
}

TEST_CASE("mu resets every reset_period iterations") {
  std::mt19937 rng(42);
  oracle::InstanceOptions opts;
  opts.r0 = 1e-2;
  const Instance inst = oracle::random_instance(4, rng, opts);
  OptimizerConfig cfg;
  cfg.reset_period = 10;
  cfg.max_outer_iters = 25;
  cfg.plateau_tol = 0.0;
  const OptimizeResult res = optimize(inst.iset, inst.term, inst.load, cfg);
  REQUIRE(res.trace.rows.size() == 26);
  // the row after each reset starts its line search from mu_init again
  const double mu_at_11 = res.trace.rows[11].mu;
  bool shrunk_before_reset = res.trace.rows[10].mu < cfg.mu_init;
  CHECK(shrunk_before_reset);
  CHECK(mu_at_11 <= cfg.mu_init);
  CHECK(mu_at_11 > res.trace.rows[10].mu);  // reset lifted it back up
}

TEST_CASE("identical runs produce bit-identical traces") {
  std::mt19937 rng(43);
  const Instance inst = oracle::random_instance(4, rng);
  OptimizerConfig cfg;
  cfg.max_outer_iters = 100;
  cfg.plateau_tol = 0.0;
  const OptimizeResult a = optimize(inst.iset, inst.term, inst.load, cfg);
  const OptimizeResult b = optimize(inst.iset, inst.term, inst.load, cfg);
  std::ostringstream csv_a, csv_b;
  a.trace.write_csv(csv_a);
  b.trace.write_csv(csv_b);
  CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("trace csv has the fixed schema") {
  std::mt19937 rng(44);
  const Instance inst = oracle::random_instance(2, rng);
  OptimizerConfig cfg;
  cfg.max_outer_iters = 3;
  cfg.plateau_tol = 0.0;
  const OptimizeResult res = optimize(inst.iset, inst.term, inst.load, cfg);
  std::ostringstream csv;
  res.trace.write_csv(csv);
  const std::string text = csv.str();
  CHECK(text.rfind("iter,objective,mu,inner_loops,cum_mults\n", 0) == 0);
  // one header plus one row per iteration incl. iteration 0
  const long long lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == 1 + static_cast<long long>(res.trace.rows.size()));
}
