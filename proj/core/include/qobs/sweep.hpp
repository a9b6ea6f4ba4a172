#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qobs/bath.hpp"
#include "qobs/config.hpp"
#include "qobs/dynamics.hpp"
#include "qobs/thermo.hpp"

namespace qobs {

std::string_view version();

/// Everything needed to solve one (gamma_D, kdT) point.
struct Model {
  DeviceSpec device;
  PhysParams params;
  HermitianOperator hamiltonian;
  SpectralDecomposition spectrum;
  std::vector<DissipatorChannel> channels;
  Superoperator liouvillian;
  int top_cut = 3;
  int bottom_cut = 3;

  [[nodiscard]] ObservableContext context() const {
    return {&device, &params, &hamiltonian, &channels, top_cut, bottom_cut};
  }
};

/// Builds the model for the configured device at the given observer strength
/// and temperature gradient. The observer channel is present whenever an
/// observer site is configured.
Model build_model(const RunConfig& config, double gamma_D, double kdT);

struct PointSolution {
  ObservablesRecord record;
  SteadyStateReport report;
};

/// Steady state and observables of a model. Rethrows SolverError with the
/// point coordinates attached.
PointSolution solve_model(const Model& model);

PointSolution solve_point(const RunConfig& config, double gamma_D, double kdT);

/// Single steady-state solve at the configured observer.gamma and kdT_au.
PointSolution run_steady(const RunConfig& config);

/// gamma_max such that the observer rate 2 gamma^2 reaches 100x the slowest
/// relaxation rate of L at gamma_D = 0, kdT = 0.
double calibrate_gamma_max(const RunConfig& config);

struct SweepRow {
  ObservablesRecord record;
  std::optional<std::string> error;
};

struct SweepResult {
  SweepGrid grid;
  std::vector<SweepRow> rows;  // kdT outer, gamma_D inner
  bool gamma_max_calibrated = false;
  double gamma_max = 0.0;
  std::string config_hash;
  std::string version;
  std::string timestamp;

  [[nodiscard]] const SweepRow& at(std::size_t kdT_index, std::size_t gamma_index) const {
    return rows[kdT_index * grid.gamma_values.size() + gamma_index];
  }
};

struct SweepOptions {
  int workers = 1;
  bool keep_going = false;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Worker count from the QOBS_WORKERS environment variable, else 1.
int default_worker_count();

/// One steady solve per grid point. Points run concurrently on
/// options.workers threads; row order is fixed by the grid. Without
/// keep_going the first failure aborts the sweep with a SolverError naming
/// the failing coordinates; with keep_going failed rows carry an error.
SweepResult run_sweep(const RunConfig& config, const SweepGrid& grid, const SweepOptions& options = {});

/// Resolves the grid (calibrating gamma_max when unset) and runs the sweep.
SweepResult run_sweep(const RunConfig& config, const SweepOptions& options = {});

/// Current UTC time as ISO 8601, e.g. 2024-01-31T12:00:00Z.
std::string utc_timestamp();

/// 64-bit FNV-1a of the canonical config text, as 16 hex digits.
std::string config_hash(const ConfigSource& source);

}  // namespace qobs
