#include "qobs/units.hpp"

#include <stdexcept>
#include <string>

namespace qobs {

namespace {

enum class Dimension { Energy, Current };

Dimension dimension_of(Unit unit) {
  switch (unit) {
    case Unit::ElectronVolt:
    case Unit::Hartree:
    case Unit::Kelvin:
      return Dimension::Energy;
    case Unit::AtomicCurrent:
    case Unit::Ampere:
      return Dimension::Current;
  }
  throw std::invalid_argument("unknown unit");
}

// Factor taking one `unit` to the atomic-unit base of its dimension.
double to_atomic(Unit unit) {
  switch (unit) {
    case Unit::ElectronVolt:
      return 1.0 / kHartreeInElectronVolt;
    case Unit::Hartree:
      return 1.0;
    case Unit::Kelvin:
      return kBoltzmannHartreePerKelvin;
    case Unit::AtomicCurrent:
      return 1.0;
    case Unit::Ampere:
      return 1.0 / kAtomicCurrentInAmpere;
  }
  throw std::invalid_argument("unknown unit");
}

}  // namespace

double convert_units(double value, Unit from, Unit to) {
  if (dimension_of(from) != dimension_of(to)) {
    throw std::invalid_argument("unsupported unit conversion: " +
                                std::string(unit_name(from)) + " -> " +
                                std::string(unit_name(to)));
  }
  // eV <-> kelvin is not one of the supported pairs; only hartree bridges them.
  const bool ev_kelvin = (from == Unit::ElectronVolt && to == Unit::Kelvin) ||
                         (from == Unit::Kelvin && to == Unit::ElectronVolt);
  if (ev_kelvin) {
    throw std::invalid_argument("unsupported unit conversion: " +
                                std::string(unit_name(from)) + " -> " +
                                std::string(unit_name(to)));
  }
  if (from == to) return value;
  return value * to_atomic(from) / to_atomic(to);
}

Unit parse_unit(std::string_view name) {
  if (name == "eV") return Unit::ElectronVolt;
  if (name == "hartree" || name == "Ha") return Unit::Hartree;
  if (name == "K" || name == "kelvin") return Unit::Kelvin;
  if (name == "au_current") return Unit::AtomicCurrent;
  if (name == "A" || name == "ampere") return Unit::Ampere;
  throw std::invalid_argument("unknown unit '" + std::string(name) + "'");
}

std::string_view unit_name(Unit unit) {
  switch (unit) {
    case Unit::ElectronVolt:
      return "eV";
    case Unit::Hartree:
      return "hartree";
    case Unit::Kelvin:
      return "K";
    case Unit::AtomicCurrent:
      return "au_current";
    case Unit::Ampere:
      return "A";
  }
  return "?";
}

}  // namespace qobs
