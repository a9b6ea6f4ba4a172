#include <gtest/gtest.h>

#include <cmath>

#include "qobs/sweep.hpp"
#include "qobs/thermo.hpp"
#include "support.hpp"

namespace qobs {
namespace {

TEST(Thermo, DimerBondCurrentIsHopping) {
  const double t = 0.02;
  const auto d = test::dimer(0.1, t);
  const auto h = assemble_hamiltonian(d);
  CVector psi(2);
  psi << 1.0, Complex(0.0, 1.0);
  psi /= std::sqrt(2.0);
  const CMatrix rho = psi * psi.adjoint();
  EXPECT_NEAR(bond_particle_current(rho, h, 0, 1), t, 1e-16);
  EXPECT_NEAR(bond_particle_current(rho, h, 1, 0), -t, 1e-16);

  // d<n_1>/dt under exact evolution, by central difference.
  const double dt = 1e-3;
  auto n1 = [&](double time) {
    const CMatrix u = test::unitary(h.matrix(), time);
    return (u * rho * u.adjoint())(1, 1).real();
  };
  EXPECT_NEAR((n1(dt) - n1(-dt)) / (2 * dt), t, 1e-9);
}

TEST(Thermo, CurrentMatchesNumberDerivative) {
  const auto device = build_flat_device(PhysParams::defaults());
  const auto h = assemble_hamiltonian(device);
  const CMatrix rho = test::random_density(28, 3);
  const auto cut = branch_cut(device, 1, 4);
  const CMatrix nl = region_number_operator(device, cut.left_sites).matrix();
  const double dt = 1e-2;
  auto occupation = [&](double time) {
    const CMatrix u = test::unitary(h.matrix(), time);
    return (u * rho * u.adjoint() * nl).trace().real();
  };
  const double oracle = -(occupation(dt) - occupation(-dt)) / (2 * dt);
  EXPECT_NEAR(particle_current(rho, h, cut), oracle, 1e-9);
}

TEST(Thermo, EntropyOfGibbsState) {
  const CMatrix h = test::random_hermitian(8, 5);
  const auto spec = eigendecompose(HermitianOperator(h));
  const double kT = 0.9;
  const auto g = DensityMatrix::gibbs(spec, kT);
  double z = 0.0;
  for (double e : spec.energies) z += std::exp(-e / kT);
  const double mean_energy = (g.matrix() * h).trace().real();
  EXPECT_NEAR(vn_entropy(g.matrix()), mean_energy / kT + std::log(z), 1e-12);
  EXPECT_NEAR(vn_entropy(DensityMatrix::maximally_mixed(28).matrix()), std::log(28.0), 1e-13);
}

TEST(Thermo, EntropyFlowConventions) {
  EXPECT_DOUBLE_EQ(entropy_flow(2e-9, 0.008), 2.5e-7);
  EXPECT_THROW(entropy_flow(1.0, 0.0), std::invalid_argument);
  ObservablesRecord r;
  r.Qdot_H = 3e-9;   // heat in from the hot bath
  r.Qdot_C = -3e-9;  // the same heat out to the cold bath
  EXPECT_NEAR(entropy_production(r, 0.009, 0.007), 3e-9 / 0.007 - 3e-9 / 0.009, 1e-20);
  EXPECT_GT(entropy_production(r, 0.009, 0.007), 0.0);
}

TEST(Thermo, ObserverEntropyFlowVanishes) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const CMatrix rho = test::random_density(28, 100 + seed);
    for (double eta : {0.05, 0.5, 0.95}) {
      EXPECT_LT(std::abs(observer_entropy_flow(rho, static_cast<int>(seed % 28), 0.02, eta)), 1e-12);
    }
  }
  const CMatrix rho = test::random_density(4, 1);
  EXPECT_THROW(observer_entropy_flow(rho, 0, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(observer_entropy_flow(rho, 0, 0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(observer_entropy_flow(rho, 4, 0.1, 0.5), std::invalid_argument);
}

class SteadyObservables : public ::testing::Test {
 protected:
  static const Model& model() {
    static const Model m = build_model(test::flat_config("observer.site = \"beta\"\n"), 0.01, 1e-3);
    return m;
  }
  static const PointSolution& solution() {
    static const PointSolution s = solve_model(model());
    return s;
  }
};

TEST_F(SteadyObservables, HeatBalance) {
  const auto& r = solution().record;
  const double scale = std::abs(r.Qdot_H) + std::abs(r.Qdot_C) + std::abs(r.Qdot_D);
  EXPECT_GT(scale, 0.0);
  EXPECT_LT(std::abs(r.Qdot_H + r.Qdot_C + r.Qdot_D), 1e-9 * scale);
  EXPECT_GT(r.Qdot_D, 0.0);  // dephasing heats the system
  EXPECT_NEAR(r.Phi_H, r.Qdot_H / 0.009, 1e-20);
  EXPECT_NEAR(r.Phi_C, r.Qdot_C / 0.007, 1e-20);
  EXPECT_NEAR(r.P_prod, -(r.Phi_H + r.Phi_C), 1e-20);
  EXPECT_GE(r.P_prod, -1e-10);
}

TEST_F(SteadyObservables, ParticleCurrentsAreConserved) {
  const auto& r = solution().record;
  EXPECT_GT(std::abs(r.j_p_up), 1e-12);
  EXPECT_LT(std::abs(r.j_p_up + r.j_p_down), 1e-9 * std::abs(r.j_p_up));
  for (double j : r.top_particle_profile) EXPECT_NEAR(j, r.j_p_up, 1e-9 * std::abs(r.j_p_up));
  for (double j : r.bottom_particle_profile) EXPECT_NEAR(j, r.j_p_down, 1e-9 * std::abs(r.j_p_up));
}

TEST_F(SteadyObservables, HotLeadEnergyLeavesThroughTheCut) {
  const auto& r = solution().record;
  EXPECT_NEAR(r.j_h_up + r.j_h_down, r.Qdot_H, 1e-9 * std::abs(r.Qdot_H));
  EXPECT_DOUBLE_EQ(r.top_energy_profile[3], r.j_h_up);
  EXPECT_DOUBLE_EQ(r.bottom_energy_profile[3], r.j_h_down);
}

TEST_F(SteadyObservables, BondSharesSumToCutCurrent) {
  const auto& m = model();
  const CMatrix& rho = solution().report.rho.matrix();
  for (int pos = 0; pos <= 5; ++pos) {
    const auto cut = branch_cut(m.device, pos, 5 - pos);
    double shares = 0.0;
    for (const auto& [i, j] : cut.bonds) shares += bond_energy_current(rho, m.device, m.hamiltonian, cut, i, j);
    const double total = energy_current(rho, m.device, m.hamiltonian, cut);
    EXPECT_NEAR(shares, total, 1e-12 * std::abs(total)) << pos;
  }
  const auto cut = branch_cut(m.device, 3, 3);
  EXPECT_THROW(bond_energy_current(rho, m.device, m.hamiltonian, cut, 0, 1), std::invalid_argument);
}

TEST_F(SteadyObservables, ObserverEntropyFlowAtSteadyState) {
  const auto& r = solution().record;
  EXPECT_LT(std::abs(r.observer_entropy_flow), 1e-12);
  EXPECT_GT(r.S_vn, 0.0);
  EXPECT_LT(r.S_vn, std::log(28.0));
}

}  // namespace
}  // namespace qobs
