#include <gtest/gtest.h>

#include <cmath>

#include "qobs/bath.hpp"
#include "support.hpp"

namespace qobs {
namespace {

constexpr double kKT = 0.008;
const BathSpectrum kBath{kKT, 0.5, 0.0367, 1e-4};

// Bath spectral weight written out from its definition.
double oracle_weight(double omega) {
  const double w = std::abs(omega);
  if (w <= kBath.omega_floor || w >= kBath.omega_c) return 0.0;
  const double n = 1.0 / (std::exp(w / kBath.kT) - 1.0);
  return (omega > 0 ? n : n + 1.0) / kBath.eps0;
}

TEST(Bath, BoseEinstein) {
  EXPECT_NEAR(bose_einstein(kKT * std::log(2.0), kKT), 1.0, 1e-14);
  EXPECT_NEAR(bose_einstein(1e-6, 1.0), 1e6, 1.0);
  EXPECT_LT(bose_einstein(1.0, 0.008), 1e-50);
  EXPECT_THROW(bose_einstein(0.0, kKT), std::domain_error);
  EXPECT_THROW(bose_einstein(0.1, 0.0), std::domain_error);
}

TEST(Bath, SpectralWeightWindows) {
  for (double w : {-0.6, -0.3, -0.01, -5e-5, 0.0, 5e-5, 2e-3, 0.1, 0.49, 0.7}) {
    EXPECT_NEAR(spectral_weight(w, kBath), oracle_weight(w), 1e-12 * std::max(1.0, oracle_weight(w))) << w;
  }
  EXPECT_EQ(spectral_weight(kBath.omega_floor, kBath), 0.0);
  EXPECT_EQ(spectral_weight(-kBath.omega_c, kBath), 0.0);
}

TEST(Bath, DetailedBalance) {
  for (double w : {1e-3, 5e-3, 0.02, 0.1}) {
    const double ratio = spectral_weight(-w, kBath) / spectral_weight(w, kBath);
    EXPECT_NEAR(std::log(ratio), w / kKT, 1e-10) << w;
  }
}

TEST(Bath, TwoLevelKernelByHand) {
  // H = diag(e0, e1), S = sigma_x: K = lambda^2 [[0, C(e0 - e1)], [C(e1 - e0), 0]].
  const double e0 = 0.01;
  const double e1 = 0.03;
  const double lambda = 0.2;
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = e0;
  h(1, 1) = e1;
  CMatrix sx = CMatrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const auto spec = eigendecompose(HermitianOperator(h));
  const CMatrix k = assemble_kernel(HermitianOperator(sx), spec, kBath, lambda);
  const double n = 1.0 / std::expm1((e1 - e0) / kKT);
  EXPECT_NEAR(k(0, 1).real(), lambda * lambda * (n + 1.0) / kBath.eps0, 1e-14);
  EXPECT_NEAR(k(1, 0).real(), lambda * lambda * n / kBath.eps0, 1e-14);
  EXPECT_NEAR(std::abs(k(0, 0)) + std::abs(k(1, 1)), 0.0, 1e-16);
}

TEST(Bath, KernelMatchesBohrFrequencyDecomposition) {
  const auto device = build_flat_device(PhysParams::defaults());
  const auto h = assemble_hamiltonian(device);
  const auto s = dipole_coupling_operator(device, Region::HotLead, Axis::X);
  const double lambda = 0.04;
  const CMatrix k = assemble_kernel(s, eigendecompose(h), kBath, lambda);

  // Independent eigensolver; sum over projector pairs lambda^2 C(E_m - E_n) P_m S P_n.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix().real());
  const Eigen::MatrixXd v = es.eigenvectors();
  const Eigen::MatrixXd sr = s.matrix().real();
  Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(28, 28);
  for (int m = 0; m < 28; ++m) {
    for (int n = 0; n < 28; ++n) {
      const double smn = v.col(m).dot(sr * v.col(n));
      oracle += lambda * lambda * oracle_weight(es.eigenvalues()(m) - es.eigenvalues()(n)) * smn * v.col(m) *
                v.col(n).transpose();
    }
  }
  EXPECT_LT((k - oracle.cast<Complex>()).cwiseAbs().maxCoeff(), 1e-12 * oracle.cwiseAbs().maxCoeff());
}

TEST(Bath, ThermalChannelsLayout) {
  auto params = PhysParams::defaults();
  params.kdT = 1e-3;
  const auto device = build_flat_device(params);
  const auto spec = eigendecompose(assemble_hamiltonian(device));
  const auto channels = thermal_channels(device, params, spec);
  ASSERT_EQ(channels.size(), 4u);
  const auto& hx = std::get<ThermalChannel>(channels[0]);
  const auto& cy = std::get<ThermalChannel>(channels[3]);
  EXPECT_EQ(hx.side, BathSide::Hot);
  EXPECT_EQ(hx.axis, Axis::X);
  EXPECT_DOUBLE_EQ(hx.kT, 0.009);
  EXPECT_EQ(cy.side, BathSide::Cold);
  EXPECT_EQ(cy.axis, Axis::Y);
  EXPECT_DOUBLE_EQ(cy.kT, 0.007);
  EXPECT_DOUBLE_EQ(default_cutoff(spec), 2.0 * (spec.energies(27) - spec.energies(0)));
}

class Dissipators : public ::testing::Test {
 protected:
  PhysParams params = [] {
    auto p = PhysParams::defaults();
    p.kdT = 1e-3;
    return p;
  }();
  DeviceSpec device = build_flat_device(params);
  std::vector<DissipatorChannel> channels = [this] {
    auto c = thermal_channels(device, params, eigendecompose(assemble_hamiltonian(device)));
    c.emplace_back(observer_channel(device, 13, 0.01));
    return c;
  }();
  CMatrix rho = test::random_density(28, 7);
};

TEST_F(Dissipators, TraceAnnihilation) {
  for (auto mode : {DissipatorMode::Hermitian, DissipatorMode::Literal}) {
    for (const auto& ch : channels) {
      EXPECT_LT(std::abs(apply_dissipator(ch, rho, mode).trace()), 1e-16);
    }
  }
}

TEST_F(Dissipators, HermitianModePreservesHermiticity) {
  for (const auto& ch : channels) {
    EXPECT_LT(hermiticity_defect(apply_dissipator(ch, rho, DissipatorMode::Hermitian)), 1e-17);
  }
  double literal = 0.0;
  for (const auto& ch : channels) {
    literal = std::max(literal, hermiticity_defect(apply_dissipator(ch, rho, DissipatorMode::Literal)));
  }
  EXPECT_GT(literal, 1e-12);
}

TEST_F(Dissipators, ObserverMatchesProjectorForm) {
  const auto& obs = std::get<ObserverChannel>(channels.back());
  const CMatrix p = site_projector(device, obs.site).matrix();
  const CMatrix oracle = obs.gamma * obs.gamma * (2.0 * p * rho * p - p * rho - rho * p);
  const CMatrix d = apply_dissipator(obs, rho, DissipatorMode::Hermitian);
  EXPECT_LT((d - oracle).cwiseAbs().maxCoeff(), 1e-18);
  EXPECT_EQ(d.diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(apply_dissipator(observer_channel(device, 13, 0.0), rho, DissipatorMode::Hermitian).cwiseAbs().maxCoeff(),
            0.0);
}

TEST_F(Dissipators, RejectsMismatchedState) {
  EXPECT_THROW(apply_dissipator(channels.front(), CMatrix::Identity(3, 3), DissipatorMode::Hermitian),
               std::invalid_argument);
  EXPECT_THROW(observer_channel(device, 28, 0.1), std::invalid_argument);
  EXPECT_THROW(observer_channel(device, 3, -0.1), std::invalid_argument);
}

}  // namespace
}  // namespace qobs
