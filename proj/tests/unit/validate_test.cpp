#include <gtest/gtest.h>

#include <algorithm>

#include "qobs/validate.hpp"
#include "support.hpp"

namespace qobs {
namespace {

const CheckResult* find(const ValidationReport& r, const std::string& name) {
  auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.name == name; });
  return it == r.checks.end() ? nullptr : &*it;
}

std::vector<std::string> failures(const ValidationReport& r) {
  std::vector<std::string> out;
  for (const auto& c : r.checks) {
    if (!c.passed && !c.informational) out.push_back(c.name);
  }
  return out;
}

TEST(Validate, FlatDevicePasses) {
  const auto report = run_validate(test::flat_config("observer.site = \"beta\"\n"));
  EXPECT_TRUE(report.all_passed()) << ::testing::PrintToString(failures(report));
  EXPECT_GE(report.checks.size(), 30u);
  for (const char* name : {"equilibrium.gibbs_distance", "gradient.second_law", "observer.energy_conservation",
                           "symmetry.alpha_gamma_antisymmetry", "dynamics.spectral_stability"}) {
    ASSERT_NE(find(report, name), nullptr) << name;
    EXPECT_TRUE(find(report, name)->passed) << name;
  }
}

TEST(Validate, DefectBreaksSymmetry) {
  const auto report = run_validate(test::flat_config("kdT_au = 1e-3\ndefect.site = 0\ndefect.shift_eV = 0.05\n"));
  EXPECT_FALSE(report.all_passed());
  const auto failed = failures(report);
  for (const char* name : {"symmetry.vertical_mirror_hamiltonian", "symmetry.horizontal_mirror_hamiltonian",
                           "symmetry.alpha_gamma_antisymmetry"}) {
    EXPECT_NE(std::find(failed.begin(), failed.end(), name), failed.end()) << name;
  }
  EXPECT_TRUE(find(report, "gradient.energy_conservation")->passed);
}

TEST(Validate, LiteralModeHermiticityIsInformational) {
  const auto report = run_validate(test::flat_config("mode = \"literal\"\n"));
  const auto* c = find(report, "bath.hermiticity_preservation");
  ASSERT_NE(c, nullptr);
  EXPECT_TRUE(c->informational);
  EXPECT_FALSE(c->passed);
  EXPECT_FALSE(find(report, "equilibrium.gibbs_distance")->passed);
}

}  // namespace
}  // namespace qobs
