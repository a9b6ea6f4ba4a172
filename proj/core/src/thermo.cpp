#include "qobs/thermo.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace qobs {

namespace {

using Complex = std::complex<double>;

std::vector<int> complement(int n, const std::vector<int>& sites) {
  std::vector<bool> in(n, false);
  for (int s : sites) in[s] = true;
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!in[i]) out.push_back(i);
  }
  return out;
}

// Re Tr(rho A) for Hermitian A.
double expectation(const CMatrix& rho, const CMatrix& a) { return (rho.transpose().cwiseProduct(a)).sum().real(); }

bool cut_contains(const CutSpec& cut, int i, int j) {
  return std::find(cut.bonds.begin(), cut.bonds.end(), std::pair{i, j}) != cut.bonds.end();
}

}  // namespace

double bond_particle_current(const CMatrix& rho, const HermitianOperator& h, int i, int j) {
  return -2.0 * (h.matrix()(i, j) * rho(j, i)).imag();
}

double particle_current(const CMatrix& rho, const HermitianOperator& h, const CutSpec& cut) {
  double total = 0.0;
  for (const auto& [i, j] : cut.bonds) total += bond_particle_current(rho, h, i, j);
  return total;
}

double energy_current(const CMatrix& rho, const DeviceSpec& device, const HermitianOperator& h, const CutSpec& cut) {
  const auto hl = region_energy_operator(device, h, cut.left_sites);
  return expectation(rho, current_generator(h, hl).matrix());
}

double bond_energy_current(const CMatrix& rho, const DeviceSpec& device, const HermitianOperator& h,
                           const CutSpec& cut, int i, int j) {
  if (!cut_contains(cut, i, j)) {
    throw std::invalid_argument(fmt::format("bond {}-{} is not part of the cut", i, j));
  }
  const auto hl = region_energy_operator(device, h, cut.left_sites);
  const auto hr = region_energy_operator(device, h, complement(device.size(), cut.left_sites));
  const Eigen::Index n = h.dim();
  CMatrix bond = CMatrix::Zero(n, n);
  bond(i, j) = h.matrix()(i, j);
  bond(j, i) = h.matrix()(j, i);
  const CMatrix diff = hr.matrix() - hl.matrix();
  const CMatrix gen = Complex(0.0, -0.5) * (diff * bond - bond * diff);
  return expectation(rho, gen);
}

double channel_heat_flow(const CMatrix& rho, const HermitianOperator& h, const DissipatorChannel& channel,
                         DissipatorMode mode) {
  return expectation(apply_dissipator(channel, rho, mode), h.matrix());
}

double entropy_flow(double qdot_in, double kT) {
  if (!(kT > 0.0)) throw std::invalid_argument(fmt::format("entropy_flow: kT must be positive, got {}", kT));
  return qdot_in / kT;
}

double entropy_production(const ObservablesRecord& record, double kT_hot, double kT_cold) {
  return -(entropy_flow(record.Qdot_H, kT_hot) + entropy_flow(record.Qdot_C, kT_cold));
}

double observer_entropy_flow(const CMatrix& rho, int site, double gamma, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("observer_entropy_flow: eta must lie in (0, 1)");
  const Eigen::Index n = rho.rows();
  if (site < 0 || site >= n) throw std::invalid_argument("observer_entropy_flow: invalid site");
  if (gamma == 0.0) return 0.0;
  CMatrix sigma = CMatrix::Identity(n, n) * (eta / static_cast<double>(n));
  sigma(site, site) += 1.0 - eta;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sigma);
  const RVector logs = solver.eigenvalues().array().log();
  const CMatrix log_sigma = solver.eigenvectors() * logs.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
  const CMatrix flow = apply_dissipator(ObserverChannel{site, gamma, n}, rho, DissipatorMode::Hermitian);
  return -(flow * log_sigma).trace().real();
}

double vn_entropy(const CMatrix& rho) {
  const RVector p = state_eigenvalues(rho);
  double s = 0.0;
  for (double x : p) {
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

ObservablesRecord evaluate_observables(const ObservableContext& ctx, const CMatrix& rho) {
  const DeviceSpec& device = *ctx.device;
  const PhysParams& params = *ctx.params;
  const HermitianOperator& h = *ctx.hamiltonian;

  ObservablesRecord r;
  r.gamma_D = params.gamma_D;
  r.kdT = params.kdT;

  const CutSpec cut = branch_cut(device, ctx.top_cut, ctx.bottom_cut);
  const auto top_bond = branch_bond(device, Branch::Top, ctx.top_cut);
  const auto bottom_bond = branch_bond(device, Branch::Bottom, ctx.bottom_cut);
  r.j_p_up = bond_particle_current(rho, h, top_bond.first, top_bond.second);
  r.j_p_down = bond_particle_current(rho, h, bottom_bond.first, bottom_bond.second);
  r.j_h_up = bond_energy_current(rho, device, h, cut, top_bond.first, top_bond.second);
  r.j_h_down = bond_energy_current(rho, device, h, cut, bottom_bond.first, bottom_bond.second);

  const int positions = static_cast<int>(device.branch_path(Branch::Top).size()) + 1;
  for (int p = 0; p < positions; ++p) {
    const CutSpec c = branch_cut(device, p, p);
    const auto tb = branch_bond(device, Branch::Top, p);
    const auto bb = branch_bond(device, Branch::Bottom, p);
    r.top_energy_profile.push_back(bond_energy_current(rho, device, h, c, tb.first, tb.second));
    r.bottom_energy_profile.push_back(bond_energy_current(rho, device, h, c, bb.first, bb.second));
    r.top_particle_profile.push_back(bond_particle_current(rho, h, tb.first, tb.second));
    r.bottom_particle_profile.push_back(bond_particle_current(rho, h, bb.first, bb.second));
  }

  for (const auto& ch : *ctx.channels) {
    const double q = channel_heat_flow(rho, h, ch, params.mode);
    if (const auto* th = std::get_if<ThermalChannel>(&ch)) {
      (th->side == BathSide::Hot ? r.Qdot_H : r.Qdot_C) += q;
    } else {
      const auto& obs = std::get<ObserverChannel>(ch);
      r.Qdot_D += q;
      r.observer_entropy_flow += observer_entropy_flow(rho, obs.site, obs.gamma, 1e-3);
    }
  }
  r.Phi_H = entropy_flow(r.Qdot_H, params.kT_hot());
  r.Phi_C = entropy_flow(r.Qdot_C, params.kT_cold());
  r.P_prod = entropy_production(r, params.kT_hot(), params.kT_cold());
  r.S_vn = vn_entropy(rho);
  r.min_eig = state_eigenvalues(rho).minCoeff();
  return r;
}

}  // namespace qobs
