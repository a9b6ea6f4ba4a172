#include "qobs/operators.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

namespace qobs {

double hermiticity_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("operator must be square");
  const double defect = hermiticity_defect(m_);
  if (defect > kHermiticityTolerance) {
    throw std::invalid_argument(fmt::format("operator is not Hermitian (defect {:.3e})", defect));
  }
}

HermitianOperator assemble_hamiltonian(const DeviceSpec& device) {
  const int n = device.size();
  CMatrix h = CMatrix::Zero(n, n);
  for (const auto& s : device.sites) h(s.id, s.id) = s.onsite;
  for (const auto& b : device.bonds) {
    h(b.i, b.j) = -b.hopping;
    h(b.j, b.i) = -b.hopping;
  }
  return HermitianOperator(std::move(h));
}

SpectralDecomposition eigendecompose(const HermitianOperator& h) {
  const CMatrix& m = h.matrix();
  SpectralDecomposition out;
  // Real symmetric input gets real eigenvectors, which keeps downstream
  // kernels real in the eigenbasis.
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real());
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error(fmt::format("eigendecomposition did not converge (dim {}, |H|_max {:.3e})",
                                           m.rows(), m.cwiseAbs().maxCoeff()));
    }
    out.energies = solver.eigenvalues();
    out.vectors = solver.eigenvectors().cast<std::complex<double>>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error(fmt::format("eigendecomposition did not converge (dim {}, |H|_max {:.3e})",
                                           m.rows(), m.cwiseAbs().maxCoeff()));
    }
    out.energies = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
  }
  return out;
}

HermitianOperator dipole_coupling_operator(const DeviceSpec& device, Region region, Axis axis) {
  const int n = device.size();
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& s : device.sites) {
    cx += s.position.x;
    cy += s.position.y;
  }
  cx /= n;
  cy /= n;
  CMatrix s = CMatrix::Zero(n, n);
  for (const auto& site : device.sites) {
    if (site.region != region) continue;
    const double r = axis == Axis::X ? site.position.x - cx : site.position.y - cy;
    s(site.id, site.id) = -r;
  }
  return HermitianOperator(std::move(s));
}

HermitianOperator site_projector(const DeviceSpec& device, int k) {
  const int n = device.size();
  if (k < 0 || k >= n) throw std::invalid_argument(fmt::format("invalid site id {}", k));
  CMatrix p = CMatrix::Zero(n, n);
  p(k, k) = 1.0;
  return HermitianOperator(std::move(p));
}

namespace {

std::vector<bool> membership(int n, const std::vector<int>& sites) {
  std::vector<bool> in(n, false);
  for (int s : sites) {
    if (s < 0 || s >= n) throw std::invalid_argument(fmt::format("invalid site id {}", s));
    in[s] = true;
  }
  return in;
}

}  // namespace

HermitianOperator region_number_operator(const DeviceSpec& device, const std::vector<int>& sites) {
  const int n = device.size();
  const auto in = membership(n, sites);
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (in[i]) m(i, i) = 1.0;
  }
  return HermitianOperator(std::move(m));
}

HermitianOperator region_energy_operator(const DeviceSpec& device, const HermitianOperator& h,
                                         const std::vector<int>& sites) {
  const int n = device.size();
  if (h.dim() != n) throw std::invalid_argument("Hamiltonian dimension does not match device");
  const auto in = membership(n, sites);
  const CMatrix& hm = h.matrix();
  CMatrix out = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int count = static_cast<int>(in[i]) + static_cast<int>(in[j]);
      if (count == 0) continue;
      // Diagonal entries have i == j, so count is 2 when the site is in L.
      out(i, j) = i == j ? hm(i, j) : 0.5 * count * hm(i, j);
    }
  }
  return HermitianOperator(std::move(out));
}

HermitianOperator current_generator(const HermitianOperator& h, const HermitianOperator& a) {
  if (h.dim() != a.dim()) throw std::invalid_argument("operator dimensions differ");
  const std::complex<double> minus_i(0.0, -1.0);
  CMatrix j = minus_i * (h.matrix() * a.matrix() - a.matrix() * h.matrix());
  // Symmetrize away rounding so the result passes the Hermiticity check.
  j = 0.5 * (j + j.adjoint()).eval();
  return HermitianOperator(std::move(j));
}

CutSpec make_cut(const DeviceSpec& device, std::vector<int> left_sites) {
  const auto in = membership(device.size(), left_sites);
  std::sort(left_sites.begin(), left_sites.end());
  left_sites.erase(std::unique(left_sites.begin(), left_sites.end()), left_sites.end());
  CutSpec cut;
  cut.left_sites = std::move(left_sites);
  for (const auto& b : device.bonds) {
    if (in[b.i] && !in[b.j]) cut.bonds.emplace_back(b.i, b.j);
    if (in[b.j] && !in[b.i]) cut.bonds.emplace_back(b.j, b.i);
  }
  return cut;
}

std::pair<int, int> branch_bond(const DeviceSpec& device, Branch branch, int position) {
  const auto path = device.branch_path(branch);
  const int len = static_cast<int>(path.size());
  if (position < 0 || position > len) {
    throw std::invalid_argument(fmt::format("branch bond position {} out of range 0..{}", position, len));
  }
  auto neighbour_in = [&](int site, Region region) {
    for (const auto& b : device.bonds) {
      const int other = b.i == site ? b.j : (b.j == site ? b.i : -1);
      if (other >= 0 && device.sites[other].region == region) return other;
    }
    throw std::invalid_argument(fmt::format("branch end {} is not attached to a lead", site));
  };
  if (position == 0) return {neighbour_in(path.front(), Region::HotLead), path.front()};
  if (position == len) return {path.back(), neighbour_in(path.back(), Region::ColdLead)};
  return {path[position - 1], path[position]};
}

CutSpec branch_cut(const DeviceSpec& device, int top_position, int bottom_position) {
  std::vector<int> left = device.region_sites(Region::HotLead);
  const auto top = device.branch_path(Branch::Top);
  const auto bottom = device.branch_path(Branch::Bottom);
  if (top_position < 0 || top_position > static_cast<int>(top.size()) || bottom_position < 0 ||
      bottom_position > static_cast<int>(bottom.size())) {
    throw std::invalid_argument("branch cut position out of range");
  }
  left.insert(left.end(), top.begin(), top.begin() + top_position);
  left.insert(left.end(), bottom.begin(), bottom.begin() + bottom_position);
  return make_cut(device, std::move(left));
}

CMatrix permutation_matrix(const std::vector<int>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(perm[i], i) = 1.0;
  return p;
}

}  // namespace qobs
