#include <gtest/gtest.h>

#include <cmath>

#include "qobs/units.hpp"

namespace qobs {
namespace {

TEST(Units, ElectronVoltToHartree) {
  EXPECT_NEAR(convert_units(1.0, Unit::ElectronVolt, Unit::Hartree), 0.0367493, 1e-7);
  EXPECT_NEAR(convert_units(1.0, Unit::Hartree, Unit::ElectronVolt), 27.211386, 1e-6);
  EXPECT_DOUBLE_EQ(ev_to_hartree(2.0), convert_units(2.0, Unit::ElectronVolt, Unit::Hartree));
}

TEST(Units, HartreeToKelvin) {
  EXPECT_NEAR(convert_units(1e-3, Unit::Hartree, Unit::Kelvin), 315.775, 1e-3);
  EXPECT_NEAR(convert_units(300.0, Unit::Kelvin, Unit::Hartree), 9.5004e-4, 1e-8);
}

TEST(Units, AtomicCurrentToAmpere) {
  EXPECT_NEAR(convert_units(3e-7, Unit::AtomicCurrent, Unit::Ampere), 1.98709e-9, 1e-14);
  EXPECT_NEAR(convert_units(1.0, Unit::Ampere, Unit::AtomicCurrent), 150.97, 1e-2);
}

TEST(Units, RoundTrip) {
  for (auto [a, b] : {std::pair{Unit::ElectronVolt, Unit::Hartree}, std::pair{Unit::Kelvin, Unit::Hartree},
                      std::pair{Unit::AtomicCurrent, Unit::Ampere}}) {
    const double x = 0.123456789;
    EXPECT_NEAR(convert_units(convert_units(x, a, b), b, a), x, 1e-15);
  }
  EXPECT_EQ(convert_units(4.0, Unit::Kelvin, Unit::Kelvin), 4.0);
}

TEST(Units, UnsupportedPairsThrow) {
  EXPECT_THROW(convert_units(1.0, Unit::ElectronVolt, Unit::Ampere), std::invalid_argument);
  EXPECT_THROW(convert_units(1.0, Unit::ElectronVolt, Unit::Kelvin), std::invalid_argument);
  EXPECT_THROW(convert_units(1.0, Unit::Kelvin, Unit::AtomicCurrent), std::invalid_argument);
}

TEST(Units, Names) {
  EXPECT_EQ(parse_unit("eV"), Unit::ElectronVolt);
  EXPECT_EQ(parse_unit("hartree"), Unit::Hartree);
  EXPECT_EQ(parse_unit("K"), Unit::Kelvin);
  EXPECT_EQ(parse_unit("A"), Unit::Ampere);
  EXPECT_EQ(parse_unit(unit_name(Unit::AtomicCurrent)), Unit::AtomicCurrent);
  EXPECT_THROW(parse_unit("furlong"), std::invalid_argument);
}

}  // namespace
}  // namespace qobs
