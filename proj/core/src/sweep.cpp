#include "qobs/sweep.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <mutex>
#include <thread>

namespace qobs {

#ifndef QOBS_VERSION
#define QOBS_VERSION "0.0.0"
#endif

std::string_view version() { return QOBS_VERSION; }

Model build_model(const RunConfig& config, double gamma_D, double kdT) {
  Model m;
  m.device = config.device;
  m.params = config.params;
  m.params.gamma_D = gamma_D;
  m.params.kdT = kdT;
  validate(m.params);
  m.top_cut = config.source.cut.top_bond;
  m.bottom_cut = config.source.cut.bottom_bond;

  m.hamiltonian = assemble_hamiltonian(m.device);
  m.spectrum = eigendecompose(m.hamiltonian);
  m.channels = thermal_channels(m.device, m.params, m.spectrum);
  if (m.params.observer_site) {
    m.channels.emplace_back(observer_channel(m.device, *m.params.observer_site, gamma_D));
  } else if (gamma_D > 0.0) {
    throw std::invalid_argument("observer gamma > 0 requires observer.site");
  }
  m.liouvillian = assemble_liouvillian(m.hamiltonian, m.channels, m.params.mode);
  return m;
}

PointSolution solve_model(const Model& model) {
  PointSolution out;
  try {
    out.report = steady_state(model.liouvillian);
  } catch (const SolverError& e) {
    throw SolverError(fmt::format("steady-state solve failed at gamma_D = {}, kdT = {}: {}", model.params.gamma_D,
                                  model.params.kdT, e.what()));
  }
  out.record = evaluate_observables(model.context(), out.report.rho.matrix());
  out.record.residual = out.report.residual;
  out.record.min_eig = out.report.min_eigenvalue;
  return out;
}

PointSolution solve_point(const RunConfig& config, double gamma_D, double kdT) {
  return solve_model(build_model(config, gamma_D, kdT));
}

PointSolution run_steady(const RunConfig& config) {
  return solve_point(config, config.params.gamma_D, config.params.kdT);
}

double calibrate_gamma_max(const RunConfig& config) {
  const Model m = build_model(config, 0.0, 0.0);
  const double rate = slowest_relaxation_rate(m.liouvillian);
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw SolverError(fmt::format("cannot calibrate gamma_max: slowest relaxation rate is {}", rate));
  }
  return std::sqrt(100.0 * rate / 2.0);
}

int default_worker_count() {
  if (const char* env = std::getenv("QOBS_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::string config_hash(const ConfigSource& source) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : emit_config(source)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SweepResult run_sweep(const RunConfig& config, const SweepGrid& grid, const SweepOptions& options) {
  SweepResult result;
  result.grid = grid;
  result.gamma_max = grid.gamma_values.empty() ? 0.0 : grid.gamma_values.back();
  result.config_hash = config_hash(config.source);
  result.version = std::string(version());
  result.timestamp = utc_timestamp();

  const std::size_t ng = grid.gamma_values.size();
  const std::size_t total = grid.size();
  result.rows.resize(total);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> abort{false};
  std::mutex failure_mutex;
  std::optional<std::pair<std::size_t, std::string>> first_failure;

  auto worker = [&] {
    while (!abort.load()) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const double kdT = grid.kdT_values[idx / ng];
      const double gamma = grid.gamma_values[idx % ng];
      SweepRow& row = result.rows[idx];
      try {
        row.record = solve_point(config, gamma, kdT).record;
      } catch (const std::exception& e) {
        row.record = ObservablesRecord{};
        row.record.gamma_D = gamma;
        row.record.kdT = kdT;
        row.error = e.what();
        if (!options.keep_going) {
          std::lock_guard lock(failure_mutex);
          // Report the lowest failing index so the message is schedule-independent.
          if (!first_failure || idx < first_failure->first) first_failure = {idx, e.what()};
          abort.store(true);
        }
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (options.progress) options.progress(finished, total);
    }
  };

  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(std::max<std::size_t>(total, 1))));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  if (first_failure) {
    const std::size_t idx = first_failure->first;
    throw SolverError(fmt::format("sweep aborted at gamma_D = {}, kdT = {}: {}", grid.gamma_values[idx % ng],
                                  grid.kdT_values[idx / ng], first_failure->second));
  }
  return result;
}

SweepResult run_sweep(const RunConfig& config, const SweepOptions& options) {
  const auto& sweep = config.source.sweep;
  const bool calibrate = !sweep.gamma_max.has_value() && sweep.gamma_steps > 1;
  const double gamma_max = calibrate ? calibrate_gamma_max(config) : sweep.gamma_max.value_or(0.0);
  const std::string label = config.source.observer_site.value_or("");
  SweepResult result = run_sweep(config, make_grid(sweep, gamma_max, label), options);
  result.gamma_max_calibrated = calibrate;
  result.gamma_max = gamma_max;
  return result;
}

}  // namespace qobs
