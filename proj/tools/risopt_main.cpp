// SPDX-License-Identifier: Apache-2.0
//
// risopt command-line front end: impedance generation, optimization runs
// and the fixed-aperture spacing sweep, all driven by a TOML config.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "risopt/experiment.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;
constexpr int kExitStall = 4;

risopt::ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw risopt::ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return risopt::parse_config(text.str());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw risopt::Error("cannot write " + path.string());
  out << content;
}

int cmd_gen_impedances(const std::string& config_path, const std::string& out_dir) {
  const risopt::ScenarioConfig config = load_config(config_path);
  const risopt::Scenario scenario = config.scenario();
  risopt::AssemblyOptions opts;
  opts.quadrature = config.quadrature;
  opts.include_direct_link = config.include_direct_link;
  const risopt::ImpedanceSet iset = risopt::assemble_impedances(scenario, opts);
  fs::create_directories(out_dir);
  const fs::path file = fs::path(out_dir) / "impedances.json";
  risopt::save_impedances(iset, file.string());
  std::cout << "wrote " << file.string() << " (n_ris = " << iset.n() << ")\n";
  return kExitOk;
}

int cmd_optimize(const std::string& config_path, const std::string& out_dir,
                 bool coupling_unaware, long long max_iters) {
  risopt::ScenarioConfig config = load_config(config_path);
  if (coupling_unaware) config.optimizer.coupling_aware = false;
  if (max_iters > 0) config.optimizer.max_outer_iters = max_iters;
  config.validate();
  fs::create_directories(out_dir);
  const fs::path cache = risopt::cache_dir(fs::path(out_dir) / "impedance-cache");
  const risopt::ImpedanceSet iset = risopt::obtain_impedances(config, cache);
  const risopt::RunResult result = risopt::run_single(config, iset);

  std::ostringstream trace;
  result.opt.trace.write_csv(trace);
  write_file(fs::path(out_dir) / "trace.csv", trace.str());
  write_file(fs::path(out_dir) / "summary.json",
             risopt::run_summary_json(result).dump(1) + "\n");
  std::cout << "final objective " << risopt::toml::format_double(result.final_objective)
            << " after " << result.iterations << " iterations (L_P = "
            << result.mean_inner_loops << ", mults = " << result.total_mults << ")\n";
  return kExitOk;
}

int cmd_sweep_spacing(const std::string& config_path, const std::string& out_dir,
                      int jobs, long long max_iters) {
  risopt::ScenarioConfig config = load_config(config_path);
  if (max_iters > 0) config.optimizer.max_outer_iters = max_iters;
  config.validate();
  fs::create_directories(out_dir);
  const fs::path cache = risopt::cache_dir(fs::path(out_dir) / "impedance-cache");
  const std::vector<risopt::SweepRow> rows = risopt::run_sweep(config, cache, jobs);
  write_file(fs::path(out_dir) / "sweep.csv", risopt::sweep_csv(rows));
  nlohmann::json detail = nlohmann::json::array();
  for (const risopt::SweepRow& r : rows) {
    detail.push_back({{"spacing_wavelengths", r.spacing_wl},
                      {"n_ris", r.n_ris},
                      {"objective_aware", r.objective_aware},
                      {"objective_unaware", r.objective_unaware},
                      {"objective_unaware_model", r.objective_unaware_model}});
  }
  write_file(fs::path(out_dir) / "sweep_summary.json", detail.dump(1) + "\n");
  for (const risopt::SweepRow& r : rows) {
    std::cout << "spacing " << r.spacing_wl << " wl: n_ris = " << r.n_ris << ", aware "
              << risopt::toml::format_double(r.objective_aware) << ", unaware "
              << risopt::toml::format_double(r.objective_unaware) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS load-reactance optimizer over a coupled wire-dipole channel model"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int jobs = 1;
  bool coupling_unaware = false;
  long long max_iters = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "path to the TOML config")->required();
    cmd->add_option("--out", out_dir, "output directory");
  };
  CLI::App* gen = app.add_subcommand("gen-impedances", "synthesize the impedance file");
  add_common(gen);
  CLI::App* opt = app.add_subcommand("optimize", "run one optimization");
  add_common(opt);
  opt->add_flag("--coupling-unaware", coupling_unaware,
                "optimize against the decoupled model, evaluate under full coupling");
  opt->add_option("--max-iters", max_iters, "override optimizer.max_outer_iters");
  CLI::App* sweep = app.add_subcommand("sweep-spacing", "fixed-aperture spacing sweep");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "max parallel sweep points")->check(CLI::PositiveNumber);
  sweep->add_option("--max-iters", max_iters, "override optimizer.max_outer_iters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (gen->parsed()) return cmd_gen_impedances(config_path, out_dir);
    if (opt->parsed()) return cmd_optimize(config_path, out_dir, coupling_unaware, max_iters);
    if (sweep->parsed()) return cmd_sweep_spacing(config_path, out_dir, jobs, max_iters);
  } catch (const risopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const risopt::FileFormatError& e) {
    std::cerr << "file error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const risopt::GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const risopt::StallError& e) {
    std::cerr << "stall: " << e.what() << " (iteration " << e.iteration() << ", mu "
              << e.mu() << ")\n";
    return kExitStall;
  } catch (const risopt::QuadratureError& e) {
    std::cerr << "numerical error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitNumericalError;
  } catch (const risopt::SingularMatrixError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const risopt::DegenerateChannelError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
