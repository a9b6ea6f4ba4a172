#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qobs/lattice.hpp"

namespace qobs {

/// Raised for malformed or invalid configuration documents. `key()` holds the
/// offending dotted key path (empty for pure syntax errors), `line()` the
/// 1-based source line (0 when not tied to a line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);

  [[nodiscard]] const std::string& key() const { return key_; }
  [[nodiscard]] int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct SweepSettings {
  std::optional<double> gamma_max;  // unset: auto-calibrated from the Liouvillian
  int gamma_steps = 21;
  double kdT_max = 2e-3;
  int kdT_steps = 21;

  friend bool operator==(const SweepSettings&, const SweepSettings&) = default;
};

/// Position of the energy/particle-current cut along each branch. Positions
/// run 0..5: 0 is the bond from the left lead to the first branch site, k in
/// 1..4 the bond between branch sites k-1 and k, 5 the bond into the right lead.
struct CutSelection {
  int top_bond = 3;
  int bottom_bond = 3;

  friend bool operator==(const CutSelection&, const CutSelection&) = default;
};

/// Onsite shift of a single site, used to build deliberately asymmetric devices.
struct SiteShift {
  int site = 0;
  double shift_eV = 0.0;

  friend bool operator==(const SiteShift&, const SiteShift&) = default;
};

/// Configuration values as written in the document (before unit conversion).
struct ConfigSource {
  DeviceKind device = DeviceKind::Flat;
  double lattice_spacing = 0.03;
  double eps0_eV = 1.0;
  double hopping_eV = 0.5;
  double lambda_rel = 0.2;
  double kT_E_au = 0.008;
  double kdT_au = 0.0;
  std::optional<double> omega_c_au;
  double omega_floor_au = 5e-4;
  std::optional<std::string> observer_site;  // name (alpha..delta) or numeric id
  double observer_gamma = 0.0;
  SweepSettings sweep;
  DissipatorMode mode = DissipatorMode::Hermitian;
  CutSelection cut;
  std::optional<SiteShift> defect;

  friend bool operator==(const ConfigSource&, const ConfigSource&) = default;
};

/// A fully validated run description.
struct RunConfig {
  ConfigSource source;
  DeviceSpec device;
  PhysParams params;
};

struct SweepGrid {
  std::vector<double> gamma_values;  // ascending, starting at 0
  std::vector<double> kdT_values;    // ascending, starting at 0, max < kT_E
  std::string observer_site;

  [[nodiscard]] std::size_t size() const { return gamma_values.size() * kdT_values.size(); }
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Builds the device and parameters from source values; throws ConfigError.
RunConfig resolve_config(const ConfigSource& source);

/// Serializes source values in the configuration format. Round-trips exactly.
std::string emit_config(const ConfigSource& source);

/// Resolves an observer label ("beta", "β", "13") against a device.
int resolve_site(const DeviceSpec& device, std::string_view label);

/// Evenly spaced axes from 0. A single step yields the axis {0}.
SweepGrid make_grid(const SweepSettings& sweep, double gamma_max, std::string observer_site);

std::vector<double> linspace(double first, double last, int count);

}  // namespace qobs
