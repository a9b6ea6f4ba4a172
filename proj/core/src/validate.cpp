#include "qobs/validate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "qobs/sweep.hpp"

namespace qobs {

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.informational; });
}

namespace {

using Complex = std::complex<double>;

constexpr double kOperatorTolerance = 1e-12;
constexpr double kReconstructionTolerance = 1e-10;
constexpr double kConservationRelative = 1e-9;
constexpr double kSecondLawTolerance = 1e-10;
constexpr double kObserverEntropyTolerance = 1e-12;
constexpr double kSymmetryRelative = 1e-8;
constexpr double kGibbsDistance = 1e-3;
constexpr double kEquilibriumCurrent = 1e-9;
constexpr double kStabilityTolerance = 1e-10;
constexpr double kFallbackGamma = 5e-3;
constexpr double kFallbackGradient = 1e-3;
constexpr int kRandomStates = 20;
constexpr double kNumericalZeroCurrent = 1e-15;

CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = Complex(normal(rng), normal(rng));
  }
  CMatrix h = a + a.adjoint();
  return h / h.trace().real();
}

// Relative difference; two currents that both vanish numerically agree.
double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale < kNumericalZeroCurrent ? 0.0 : std::abs(a - b) / scale;
}

class Suite {
 public:
  void add(std::string name, double defect, double tolerance, std::string detail = {}, bool informational = false) {
    const bool passed = std::isfinite(defect) && defect <= tolerance;
    report_.checks.push_back({std::move(name), passed, defect, tolerance, informational, std::move(detail)});
  }

  void fail(std::string name, std::string detail) {
    report_.checks.push_back({std::move(name), false, std::nan(""), 0.0, false, std::move(detail)});
  }

  // Runs `body`; a thrown exception becomes a failed check named `name`.
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      fail(name, e.what());
    }
  }

  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

RunConfig with_observer(const RunConfig& config, int site) {
  RunConfig c = config;
  c.params.observer_site = site;
  return c;
}

double permuted_defect(const CMatrix& h, const std::vector<int>& perm) {
  const CMatrix p = permutation_matrix(perm);
  return (p * h * p.transpose() - h).cwiseAbs().maxCoeff();
}

double adjacency_defect(const DeviceSpec& device, const std::vector<int>& perm) {
  const int n = device.size();
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& b : device.bonds) {
    adj(b.i, b.j) = 1.0;
    adj(b.j, b.i) = 1.0;
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) p(perm[i], i) = 1.0;
  return (p * adj * p.transpose() - adj).cwiseAbs().maxCoeff();
}

void operator_checks(Suite& suite, const RunConfig& config, const Model& model) {
  const DeviceSpec& device = model.device;
  const CMatrix& h = model.hamiltonian.matrix();

  suite.add("device.connected", is_connected(device) ? 0.0 : 1.0, 0.0);
  suite.add("hamiltonian.hermiticity", hermiticity_defect(h), kOperatorTolerance);

  const auto& spec = model.spectrum;
  const CMatrix rebuilt = spec.vectors * spec.energies.cast<Complex>().asDiagonal() * spec.vectors.adjoint();
  suite.add("spectrum.reconstruction", (rebuilt - h).cwiseAbs().maxCoeff(), kReconstructionTolerance);
  const CMatrix overlap = spec.vectors.adjoint() * spec.vectors;
  suite.add("spectrum.orthonormality", (overlap - CMatrix::Identity(h.rows(), h.cols())).cwiseAbs().maxCoeff(),
            kReconstructionTolerance);

  const CutSpec cut = branch_cut(device, config.source.cut.top_bond, config.source.cut.bottom_bond);
  std::vector<int> rest;
  for (int i = 0; i < device.size(); ++i) {
    if (!std::binary_search(cut.left_sites.begin(), cut.left_sites.end(), i)) rest.push_back(i);
  }
  const CMatrix partition = region_energy_operator(device, model.hamiltonian, cut.left_sites).matrix() +
                            region_energy_operator(device, model.hamiltonian, rest).matrix();
  suite.add("operators.energy_partition", (partition - h).cwiseAbs().maxCoeff(), kOperatorTolerance);

  const auto jl = current_generator(model.hamiltonian, region_number_operator(device, cut.left_sites));
  const auto jr = current_generator(model.hamiltonian, region_number_operator(device, rest));
  suite.add("operators.current_antisymmetry", (jl.matrix() + jr.matrix()).cwiseAbs().maxCoeff(), kOperatorTolerance);
}

void symmetry_checks(Suite& suite, const RunConfig& config, const Model& model) {
  const DeviceSpec& device = model.device;
  const CMatrix& h = model.hamiltonian.matrix();
  const auto vm = vertical_mirror(device);
  const auto hm = horizontal_mirror(device);
  suite.add("symmetry.vertical_mirror_graph", adjacency_defect(device, vm), 0.0);
  suite.add("symmetry.horizontal_mirror_graph", adjacency_defect(device, hm), 0.0);

  if (config.source.device == DeviceKind::Flat) {
    suite.add("symmetry.vertical_mirror_hamiltonian", permuted_defect(h, vm), kOperatorTolerance);
    suite.add("symmetry.horizontal_mirror_hamiltonian", permuted_defect(h, hm), kOperatorTolerance);
  } else {
    // Left-right mirror carries the top ladder onto the bottom ladder, so
    // the ratchet is invariant under the composition of both mirrors.
    std::vector<int> rotation(vm.size());
    for (std::size_t i = 0; i < vm.size(); ++i) rotation[i] = vm[hm[i]];
    suite.add("symmetry.ladder_rotation_hamiltonian", permuted_defect(h, rotation), kOperatorTolerance);
  }
}

void bath_checks(Suite& suite, const Model& model, int observer_site, double gamma) {
  const Eigen::Index n = model.hamiltonian.dim();
  std::mt19937_64 rng(20240611);
  std::vector<DissipatorChannel> channels = model.channels;
  channels.emplace_back(observer_channel(model.device, observer_site, gamma));

  double trace = 0.0;
  double herm_hermitian = 0.0;
  double herm_literal = 0.0;
  double observer_diag = 0.0;
  for (int s = 0; s < kRandomStates; ++s) {
    const CMatrix rho = random_hermitian(rng, n);
    for (const auto& ch : channels) {
      const CMatrix dh = apply_dissipator(ch, rho, DissipatorMode::Hermitian);
      const CMatrix dl = apply_dissipator(ch, rho, DissipatorMode::Literal);
      trace = std::max({trace, std::abs(dh.trace()), std::abs(dl.trace())});
      herm_hermitian = std::max(herm_hermitian, hermiticity_defect(dh));
      herm_literal = std::max(herm_literal, hermiticity_defect(dl));
      if (std::holds_alternative<ObserverChannel>(ch)) {
        observer_diag = std::max(observer_diag, dh.diagonal().cwiseAbs().maxCoeff());
      }
    }
  }
  suite.add("bath.trace_annihilation", trace, kOperatorTolerance);
  const bool literal = model.params.mode == DissipatorMode::Literal;
  suite.add("bath.hermiticity_preservation", literal ? herm_literal : herm_hermitian, kOperatorTolerance,
            literal ? "literal mode: violation reported, not enforced" : "", literal);
  suite.add("bath.observer_zero_diagonal", observer_diag, kOperatorTolerance);
}

void liouvillian_checks(Suite& suite, const Model& model) {
  const Eigen::Index n = model.hamiltonian.dim();
  std::mt19937_64 rng(977);
  double mismatch = 0.0;
  for (int s = 0; s < kRandomStates; ++s) {
    const CMatrix rho = random_hermitian(rng, n);
    const CMatrix direct = master_equation_rhs(model.hamiltonian, model.channels, model.params.mode, rho);
    mismatch = std::max(mismatch, (model.liouvillian.apply(rho) - direct).cwiseAbs().maxCoeff());
  }
  suite.add("dynamics.liouvillian_matches_direct", mismatch, kOperatorTolerance);

  // Tr L[rho] = 0 for every rho <=> vec(I)^T L = 0.
  CVector id = CVector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) id(i + n * i) = 1.0;
  suite.add("dynamics.trace_preservation", (id.transpose() * model.liouvillian.matrix()).cwiseAbs().maxCoeff(),
            kOperatorTolerance);

  const CVector ev = liouvillian_spectrum(model.liouvillian);
  const double max_re = ev.real().maxCoeff();
  const bool literal = model.params.mode == DissipatorMode::Literal;
  suite.add("dynamics.spectral_stability", max_re, kStabilityTolerance,
            fmt::format("max Re(lambda) = {:.3e}{}", max_re, literal ? "; literal mode" : ""), literal);
}

// Identities that hold for every steady state. Conservation bounds are
// relative, widened by the exact residual bound |Tr(A L[rho])| <= |A|_F |L[rho]|_F.
void steady_checks(Suite& suite, const std::string& label, const Model& model, const PointSolution& sol) {
  const ObservablesRecord& r = sol.record;
  const double residual = sol.report.residual;
  const double h_norm = model.hamiltonian.matrix().norm();

  suite.add(label + ".residual", residual, kResidualTolerance * sol.report.sigma_max,
            fmt::format("nullspace dimension {}", sol.report.nullspace_dim));
  suite.add(label + ".positivity", std::max(0.0, -r.min_eig), kNegativityTolerance,
            fmt::format("min eigenvalue {:.3e}", r.min_eig));

  const double qscale = std::max({std::abs(r.Qdot_H), std::abs(r.Qdot_C), std::abs(r.Qdot_D)});
  suite.add(label + ".energy_conservation", std::abs(r.Qdot_H + r.Qdot_C + r.Qdot_D),
            kConservationRelative * qscale + h_norm * residual,
            fmt::format("Qdot_H {:.3e}, Qdot_C {:.3e}, Qdot_D {:.3e}", r.Qdot_H, r.Qdot_C, r.Qdot_D));

  const double jscale = std::max(std::abs(r.j_p_up), std::abs(r.j_p_down));
  const double n_norm = std::sqrt(static_cast<double>(model.device.size()));
  suite.add(label + ".particle_conservation", std::abs(r.j_p_up + r.j_p_down),
            kConservationRelative * jscale + n_norm * residual,
            fmt::format("j_p top {:.3e}, bottom {:.3e}", r.j_p_up, r.j_p_down));

  // Along a branch the particle current is the same on every bond, including
  // the bonds on either side of an observed site.
  double spread = 0.0;
  double pscale = 0.0;
  for (const auto* profile : {&r.top_particle_profile, &r.bottom_particle_profile}) {
    const auto [lo, hi] = std::minmax_element(profile->begin(), profile->end());
    spread = std::max(spread, *hi - *lo);
    for (double v : *profile) pscale = std::max(pscale, std::abs(v));
  }
  suite.add(label + ".branch_current_uniform", spread, kConservationRelative * pscale + n_norm * residual);

  suite.add(label + ".second_law", std::max(0.0, -r.P_prod), kSecondLawTolerance,
            fmt::format("P_prod {:.3e}", r.P_prod));
  suite.add(label + ".observer_entropy_flow", std::abs(r.observer_entropy_flow), kObserverEntropyTolerance);
}

}  // namespace

ValidationReport run_validate(const RunConfig& config) {
  Suite suite;
  const bool flat = config.source.device == DeviceKind::Flat;
  const int observer_site = config.params.observer_site.value_or(config.device.site(NamedSite::Beta));
  const double gamma = config.params.gamma_D > 0.0 ? config.params.gamma_D : kFallbackGamma;
  const double gradient = config.params.kdT > 0.0 ? config.params.kdT : kFallbackGradient;

  suite.guarded("model.build", [&] {
    const Model base = build_model(config, 0.0, config.params.kdT);
    operator_checks(suite, config, base);
    symmetry_checks(suite, config, base);
    bath_checks(suite, base, observer_site, gamma);
    liouvillian_checks(suite, base);
  });

  suite.guarded("equilibrium.solve", [&] {
    const Model m = build_model(config, 0.0, 0.0);
    const PointSolution sol = solve_model(m);
    const DensityMatrix gibbs = DensityMatrix::gibbs(m.spectrum, m.params.kT_E);
    suite.add("equilibrium.gibbs_distance", trace_distance(gibbs.matrix(), sol.report.rho.matrix()), kGibbsDistance);
    const auto& r = sol.record;
    const double flows = std::max({std::abs(r.j_p_up), std::abs(r.j_h_up), std::abs(r.j_h_down),
                                   std::abs(r.Qdot_H), std::abs(r.Qdot_C)});
    suite.add("equilibrium.no_flows", flows, kEquilibriumCurrent);
  });

  suite.guarded("gradient.solve", [&] {
    const Model m = build_model(config, 0.0, gradient);
    const PointSolution sol = solve_model(m);
    steady_checks(suite, "gradient", m, sol);
    const auto& r = sol.record;
    const double continuity = std::abs(r.j_h_up + r.j_h_down - r.Qdot_H);
    suite.add("gradient.cut_continuity", continuity,
              kConservationRelative * std::abs(r.Qdot_H) + m.hamiltonian.matrix().norm() * sol.report.residual,
              fmt::format("j_h_up + j_h_down {:.6e}, Qdot_H {:.6e}", r.j_h_up + r.j_h_down, r.Qdot_H));
    if (flat) {
      suite.add("gradient.equal_branches", relative_gap(r.j_h_up, r.j_h_down), kSymmetryRelative,
                fmt::format("j_h_up {:.6e}, j_h_down {:.6e}", r.j_h_up, r.j_h_down));
    }
  });

  suite.guarded("observer.solve", [&] {
    const RunConfig observed = with_observer(config, observer_site);
    const Model m = build_model(observed, gamma, gradient);
    steady_checks(suite, "observer", m, solve_model(m));
  });

  if (flat) {
    suite.guarded("symmetry.alpha_gamma_antisymmetry", [&] {
      const double ja =
          solve_point(with_observer(config, config.device.site(NamedSite::Alpha)), gamma, gradient).record.j_p_up;
      const double jg =
          solve_point(with_observer(config, config.device.site(NamedSite::Gamma)), gamma, gradient).record.j_p_up;
      suite.add("symmetry.alpha_gamma_antisymmetry", relative_gap(ja, -jg),
                kSymmetryRelative, fmt::format("j_p_up alpha {:.6e}, gamma {:.6e}", ja, jg));
    });
  }

  return suite.take();
}

}  // namespace qobs
