#pragma once

#include <string_view>

namespace qobs {

// CODATA 2018 values. Everything inside the library is in hartree atomic
// units; these are only used at the I/O boundary.
inline constexpr double kHartreeInElectronVolt = 27.211386245988;
inline constexpr double kBoltzmannHartreePerKelvin = 3.1668115634556e-6;
inline constexpr double kAtomicCurrentInAmpere = 6.623618237510e-3;

enum class Unit { ElectronVolt, Hartree, Kelvin, AtomicCurrent, Ampere };

/// Converts between the supported unit pairs:
/// eV <-> hartree, kelvin <-> hartree (via k_B), a.u. current <-> ampere.
/// Throws std::invalid_argument for any other pair.
double convert_units(double value, Unit from, Unit to);

Unit parse_unit(std::string_view name);
std::string_view unit_name(Unit unit);

inline double ev_to_hartree(double ev) { return ev / kHartreeInElectronVolt; }

}  // namespace qobs
