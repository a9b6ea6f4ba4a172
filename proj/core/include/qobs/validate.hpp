#pragma once

#include <string>
#include <vector>

#include "qobs/config.hpp"

namespace qobs {

struct CheckResult {
  std::string name;
  bool passed = false;
  double defect = 0.0;
  double tolerance = 0.0;
  bool informational = false;  // reported, never fails the suite
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  /// True when every non-informational check passed.
  [[nodiscard]] bool all_passed() const;
};

/// Runs the invariant suites of all modules against one configuration.
/// Checks needing an observer use the configured site and gamma, falling
/// back to beta and gamma_D = 5e-3. Checks needing a gradient use kdT_au,
/// falling back to 1e-3. Solver failures become failed checks.
ValidationReport run_validate(const RunConfig& config);

}  // namespace qobs
