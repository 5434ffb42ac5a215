// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "risopt/complexity.hpp"
#include "risopt/impedance_set.hpp"
#include "risopt/optimizer.hpp"
#include "risopt/scenario_config.hpp"

namespace risopt {

namespace detail {

inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace detail

/// Stable hash of everything that determines the synthesized impedances.
inline std::string geometry_hash(const ScenarioConfig& c, double spacing_override_wl = 0.0) {
  std::ostringstream key;
  auto d = [&](double v) { key << toml::format_double(v) << "|"; };
  d(c.frequency_hz);
  key << c.ris_rows << "|" << c.ris_cols << "|";
  d(c.ris_aperture_m);
  d(spacing_override_wl > 0.0 ? spacing_override_wl : c.ris_spacing_wl);
  d(c.length_equals_spacing ? (spacing_override_wl > 0.0 ? spacing_override_wl : c.ris_spacing_wl)
                            : c.element_length_wl);
  d(c.element_radius_wl);
  d(c.tx_position_m.x());
  d(c.tx_position_m.y());
  d(c.tx_position_m.z());
  d(c.tx_length_wl);
  d(c.tx_radius_wl);
  d(c.rx_position_m.x());
  d(c.rx_position_m.y());
  d(c.rx_position_m.z());
  d(c.rx_length_wl);
  d(c.rx_radius_wl);
  key << (c.include_direct_link ? 1 : 0) << "|";
  key << c.quadrature.initial_nodes << "|" << c.quadrature.max_nodes << "|";
  d(c.quadrature.rel_tol);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(detail::fnv1a(key.str())));
  return buf;
}

/// Cache directory: RIS_OPT_CACHE_DIR if set, else fallback (typically
/// <out>/impedance-cache).
inline std::filesystem::path cache_dir(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("RIS_OPT_CACHE_DIR")) {
    if (*env) return env;
  }
  return fallback;
}

/// Impedances for a config: explicit file if given, else the cache, else
/// synthesis (stored in the cache afterwards, via atomic rename).
inline ImpedanceSet obtain_impedances(const ScenarioConfig& config,
                                      const std::filesystem::path& cache,
                                      double spacing_override_wl = 0.0,
                                      int threads = 0) {
  if (!config.impedance_file.empty()) {
    return load_impedances(config.impedance_file);
  }
  const std::filesystem::path file =
      cache / ("impedances-" + geometry_hash(config, spacing_override_wl) + ".json");
  if (std::filesystem::exists(file)) {
    return load_impedances(file.string());
  }
  const Scenario scenario = config.scenario(spacing_override_wl);
  AssemblyOptions opts;
  opts.quadrature = config.quadrature;
  opts.include_direct_link = config.include_direct_link;
  opts.threads = threads;
  const ImpedanceSet iset = assemble_impedances(scenario, opts);
  std::filesystem::create_directories(cache);
  const std::filesystem::path tmp = file.string() + ".tmp";
  save_impedances(iset, tmp.string());
  std::filesystem::rename(tmp, file);
  return iset;
}

/// One optimization run plus the headline numbers derived from its trace.
struct RunResult {
  OptimizeResult opt;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  long long iterations = 0;
  long long iters_to_95pct = 0;
  double mean_inner_loops = 0.0;
  std::uint64_t total_mults = 0;
  bool coupling_aware = true;
  // populated in the coupling-unaware pipeline only
  std::optional<double> unaware_model_objective;
};

/// Runs the configured pipeline. Coupling-aware: optimize against the full
/// model. Coupling-unaware: optimize against the decoupled model, then
/// evaluate the resulting load under the full-coupling channel.
inline RunResult run_single(const ScenarioConfig& config, const ImpedanceSet& iset) {
  config.validate();
  const Terminations term = config.terminations();
  const RisLoad init = default_initializer(iset, config.r0_ohm, config.bounds);
  RunResult r;
  r.coupling_aware = config.optimizer.coupling_aware;
  if (config.optimizer.coupling_aware) {
    r.opt = optimize(iset, term, init, config.optimizer);
    r.final_objective = r.opt.objective;
  } else {
    const ImpedanceSet decoupled = unaware_counterpart(iset);
    r.opt = optimize(decoupled, term, init, config.optimizer);
    r.unaware_model_objective = r.opt.objective;
    const ChannelEval full = transfer_function(iset, r.opt.load, term);
    r.final_objective = full.objective;
  }
  r.initial_objective = r.opt.trace.rows.front().objective;
  r.iterations = r.opt.trace.rows.back().iter;
  r.iters_to_95pct = r.opt.trace.iters_to_fraction(0.95);
  r.mean_inner_loops = r.opt.trace.mean_inner_loops();
  r.total_mults = r.opt.counter.total();
  return r;
}

inline nlohmann::json run_summary_json(const RunResult& r) {
  nlohmann::json j;
  j["coupling_aware"] = r.coupling_aware;
  j["initial_objective"] = r.initial_objective;
  j["final_objective"] = r.final_objective;
  j["iterations"] = r.iterations;
  j["iters_to_95pct_of_final"] = r.iters_to_95pct;
  j["mean_inner_loops"] = r.mean_inner_loops;
  j["total_complex_mults"] = r.total_mults;
  j["mults_factorization"] = r.opt.counter.factorization;
  j["mults_solves"] = r.opt.counter.solves;
  j["mults_gradient"] = r.opt.counter.gradient;
  j["mults_objective"] = r.opt.counter.objective;
  j["stop_reason"] =
      r.opt.stop_reason == StopReason::kPlateau ? "plateau" : "max_iterations";
  j["phi_bound_ratio_max"] = r.opt.phi_bound_ratio_max;
  j["phi_bound_exceeded"] = r.opt.phi_bound_exceeded;
  if (r.unaware_model_objective) {
    j["unaware_model_objective"] = *r.unaware_model_objective;
  }
  return j;
}

struct SweepRow {
  double spacing_wl = 0.0;
  int n_ris = 0;
  double objective_aware = 0.0;
  double objective_unaware = 0.0;          // evaluated under full coupling
  double objective_unaware_model = 0.0;    // as seen by the decoupled model
};

/// Fixed-aperture spacing sweep: for each spacing, run the coupling-aware
/// and coupling-unaware pipelines on the same synthesized impedances.
/// Points may run in parallel; rows keep the configured spacing order.
inline std::vector<SweepRow> run_sweep(const ScenarioConfig& config,
                                       const std::filesystem::path& cache,
                                       int jobs = 1) {
  config.validate();
  if (!(config.ris_aperture_m > 0.0)) {
    throw ConfigError("sweep-spacing needs an aperture-mode RIS config (aperture_m > 0)");
  }
  std::vector<SweepRow> rows(config.sweep_spacings_wl.size());
  detail::parallel_for(static_cast<int>(rows.size()), jobs, [&](int i) {
    const double spacing = config.sweep_spacings_wl[static_cast<size_t>(i)];
    const ImpedanceSet iset = obtain_impedances(config, cache, spacing);

    ScenarioConfig aware = config;
    aware.optimizer.coupling_aware = true;
    const RunResult ra = run_single(aware, iset);

    ScenarioConfig unaware = config;
    unaware.optimizer.coupling_aware = false;
    const RunResult ru = run_single(unaware, iset);

    SweepRow& row = rows[static_cast<size_t>(i)];
    row.spacing_wl = spacing;
    row.n_ris = iset.n();
    row.objective_aware = ra.final_objective;
    row.objective_unaware = ru.final_objective;
    row.objective_unaware_model = *ru.unaware_model_objective;
  });
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "spacing,n_ris,objective_aware,objective_unaware\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g\n", r.spacing_wl, r.n_ris,
                  r.objective_aware, r.objective_unaware);
    out << buf;
  }
  return out.str();
}

}  // namespace risopt
