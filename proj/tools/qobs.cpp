// qobs: steady-state solves, parameter sweeps and validation from the command line.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qobs/config.hpp"
#include "qobs/csv.hpp"
#include "qobs/heatmap.hpp"
#include "qobs/sweep.hpp"
#include "qobs/validate.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kConfigFailure = 1, kSolverFailure = 2 };

struct ConfigFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

qobs::RunConfig load(const std::string& path) {
  try {
    return qobs::load_config(path);
  } catch (const qobs::ConfigError& e) {
    throw ConfigFailure(fmt::format("{}: {}", path, e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigFailure(fmt::format("{}: {}", path, e.what()));
  }
}

void warn_positivity(const qobs::ObservablesRecord& r) {
  if (r.min_eig < -qobs::kNegativityTolerance) {
    spdlog::warn("Redfield positivity: steady state at gamma_D = {}, kdT = {} has min eigenvalue {:.3e} (< -{:.0e})",
                 r.gamma_D, r.kdT, r.min_eig, qobs::kNegativityTolerance);
  }
}

json provenance(const qobs::RunConfig& cfg, const qobs::SweepResult& result) {
  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.error.has_value();
  return json{{"version", result.version},
              {"timestamp", result.timestamp},
              {"config_hash", result.config_hash},
              {"config", qobs::emit_config(cfg.source)},
              {"gamma_max", result.gamma_max},
              {"gamma_max_calibrated", result.gamma_max_calibrated},
              {"observer_site", result.grid.observer_site},
              {"gamma_steps", result.grid.gamma_values.size()},
              {"kdT_steps", result.grid.kdT_values.size()},
              {"failed_rows", failed}};
}

void write_outputs(const qobs::RunConfig& cfg, const qobs::SweepResult& result, const fs::path& out) {
  qobs::write_csv(result, out);
  std::ofstream meta(out.string() + ".meta.json");
  if (!meta) throw std::runtime_error(fmt::format("cannot write {}.meta.json", out.string()));
  meta << provenance(cfg, result).dump(2) << '\n';
}

void print_record(const qobs::ObservablesRecord& r) {
  for (auto column : qobs::kCsvColumns) {
    fmt::print("{:<10} {: .17g}\n", column, *qobs::column_value(r, column));
  }
  fmt::print("{:<10} {: .17g}\n", "j_p_down", r.j_p_down);
  auto profile = [](const char* name, const std::vector<double>& v) {
    fmt::print("{:<22}", name);
    for (double x : v) fmt::print(" {: .6e}", x);
    fmt::print("\n");
  };
  fmt::print("bond profiles (positions 0..{}, left to right):\n", r.top_energy_profile.size() - 1);
  profile("  energy, top", r.top_energy_profile);
  profile("  energy, bottom", r.bottom_energy_profile);
  profile("  particles, top", r.top_particle_profile);
  profile("  particles, bottom", r.bottom_particle_profile);
}

qobs::SweepResult single_point_result(const qobs::RunConfig& cfg, const qobs::ObservablesRecord& record) {
  qobs::SweepResult result;
  result.grid.gamma_values = {record.gamma_D};
  result.grid.kdT_values = {record.kdT};
  result.grid.observer_site = cfg.source.observer_site.value_or("");
  result.rows = {qobs::SweepRow{record, std::nullopt}};
  result.gamma_max = record.gamma_D;
  result.config_hash = qobs::config_hash(cfg.source);
  result.version = std::string(qobs::version());
  result.timestamp = qobs::utc_timestamp();
  return result;
}

int cmd_steady(const std::string& config_path, const std::string& out) {
  const auto cfg = load(config_path);
  const auto sol = qobs::run_steady(cfg);
  warn_positivity(sol.record);
  spdlog::info("steady state: nullspace dimension {}, residual {:.3e} (sigma_max {:.3e})", sol.report.nullspace_dim,
               sol.report.residual, sol.report.sigma_max);
  print_record(sol.record);
  if (!out.empty()) write_outputs(cfg, single_point_result(cfg, sol.record), out);
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out, const std::string& column,
              const std::string& img, int workers, bool keep_going) {
  const auto cfg = load(config_path);
  if (!column.empty() && !qobs::is_column(column)) {
    throw ConfigFailure(fmt::format("--heatmap: unknown column '{}'", column));
  }

  qobs::SweepOptions options;
  options.workers = workers;
  options.keep_going = keep_going;
  auto last_report = std::chrono::steady_clock::now();
  options.progress = [&last_report](std::size_t done, std::size_t total) {
    const auto now = std::chrono::steady_clock::now();
    if (done == total || now - last_report > std::chrono::seconds(10)) {
      last_report = now;
      spdlog::info("sweep progress {}/{}", done, total);
    }
  };

  const auto& sweep = cfg.source.sweep;
  double gamma_max = sweep.gamma_max.value_or(0.0);
  const bool calibrate = !sweep.gamma_max && sweep.gamma_steps > 1;
  if (calibrate) {
    gamma_max = qobs::calibrate_gamma_max(cfg);
    spdlog::info("gamma_max auto-calibrated to {:.6e} (2 gamma_max^2 = 100 x slowest relaxation rate)", gamma_max);
  }
  const auto grid = qobs::make_grid(sweep, gamma_max, cfg.source.observer_site.value_or(""));
  spdlog::info("sweeping {} x {} points on {} worker(s)", grid.kdT_values.size(), grid.gamma_values.size(),
               options.workers);
  auto result = qobs::run_sweep(cfg, grid, options);
  result.gamma_max = gamma_max;
  result.gamma_max_calibrated = calibrate;

  std::size_t failed = 0;
  for (const auto& row : result.rows) {
    if (row.error) {
      ++failed;
      spdlog::error("gamma_D = {}, kdT = {}: {}", row.record.gamma_D, row.record.kdT, *row.error);
    } else {
      warn_positivity(row.record);
    }
  }

  write_outputs(cfg, result, out);
  spdlog::info("wrote {} rows to {}", result.rows.size(), out);
  if (!column.empty()) {
    qobs::emit_heatmap(result, column, img);
    spdlog::info("wrote {} heatmap to {}", column, img);
  }
  return failed == 0 ? kOk : kSolverFailure;
}

int cmd_validate(const std::string& config_path) {
  const auto cfg = load(config_path);
  const auto report = qobs::run_validate(cfg);
  std::size_t failures = 0;
  for (const auto& c : report.checks) {
    const char* status = c.passed ? "PASS" : (c.informational ? "INFO" : "FAIL");
    failures += !c.passed && !c.informational;
    fmt::print("{} {:<40} defect {:.3e}  tol {:.3e}{}{}\n", status, c.name, c.defect, c.tolerance,
               c.detail.empty() ? "" : "  ", c.detail);
  }
  fmt::print("{} of {} checks failed\n", failures, report.checks.size());
  return report.all_passed() ? kOk : kSolverFailure;
}

int cmd_propagate(const std::string& config_path, double t, double dt) {
  const auto cfg = load(config_path);
  const auto model = qobs::build_model(cfg, cfg.params.gamma_D, cfg.params.kdT);
  const double sigma = qobs::estimate_sigma_max(model.liouvillian);
  if (dt * sigma > 0.1) {
    spdlog::warn("dt * sigma_max(L) = {:.3f} exceeds the documented stability bound 0.1", dt * sigma);
  }
  const auto n = model.hamiltonian.dim();
  const auto rho = qobs::propagate(qobs::DensityMatrix::maximally_mixed(n), model.liouvillian, t, dt);
  const auto diag = qobs::validate_state(rho);
  const auto steady = qobs::solve_model(model);
  const double diff = (rho.matrix() - steady.report.rho.matrix()).cwiseAbs().maxCoeff();

  fmt::print("t_final            {:.6e}\n", t);
  fmt::print("dt                 {:.6e}  (dt * sigma_max = {:.3e})\n", dt, dt * sigma);
  fmt::print("trace deviation    {:.3e}\n", diag.trace_deviation);
  fmt::print("hermiticity defect {:.3e}\n", diag.hermiticity_defect);
  fmt::print("min eigenvalue     {:.3e}\n", diag.min_eigenvalue);
  fmt::print("purity             {:.9f}\n", diag.purity);
  fmt::print("max |rho(t) - rho_ss| {:.3e}\n", diff);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("qobs"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Quantum observer transport: steady states, sweeps and validation"};
  app.set_version_flag("--version", std::string(qobs::version()));
  app.require_subcommand(1);

  std::string config;
  std::string out;
  auto* steady = app.add_subcommand("steady", "Single steady-state solve at observer.gamma and kdT_au");
  steady->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);
  steady->add_option("--out", out, "Write the record as a one-row CSV");

  std::string column;
  std::string img;
  int workers = qobs::default_worker_count();
  bool keep_going = false;
  auto* sweep = app.add_subcommand("sweep", "Steady states over the (gamma_D, kdT) grid");
  sweep->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "CSV output path")->required();
  auto* heat = sweep->add_option("--heatmap", column, "CSV column to render");
  auto* image = sweep->add_option("--img", img, "Heatmap path (.svg renders an image, anything else a data grid)");
  heat->needs(image);
  image->needs(heat);
  sweep->add_option("--workers", workers, "Concurrent solves (default: $QOBS_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--keep-going", keep_going, "Record failed points instead of aborting");

  auto* validate = app.add_subcommand("validate", "Run the invariant checks");
  validate->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);

  double t = 0.0;
  double dt = 0.0;
  auto* prop = app.add_subcommand("propagate", "RK4 propagation from I/N, compared with the steady state");
  prop->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);
  prop->add_option("--t", t, "Final time (a.u.)")->required()->check(CLI::NonNegativeNumber);
  prop->add_option("--dt", dt, "Step (a.u.)")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigFailure;
  }

  try {
    if (*steady) return cmd_steady(config, out);
    if (*sweep) return cmd_sweep(config, out, column, img, workers, keep_going);
    if (*validate) return cmd_validate(config);
    if (*prop) return cmd_propagate(config, t, dt);
  } catch (const ConfigFailure& e) {
    spdlog::error("configuration error: {}", e.what());
    return kConfigFailure;
  } catch (const qobs::SolverError& e) {
    spdlog::error("solver failure: {}", e.what());
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    spdlog::error("invalid input: {}", e.what());
    return kConfigFailure;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kSolverFailure;
  }
  return kOk;
}
