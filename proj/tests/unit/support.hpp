#pragma once

#include <complex>
#include <random>
#include <string>

#include "qobs/config.hpp"
#include "qobs/operators.hpp"

namespace qobs {
using Complex = std::complex<double>;
}  // namespace qobs

namespace qobs::test {

inline RunConfig config_from(const std::string& body) { return parse_config(body); }

inline RunConfig flat_config(const std::string& extra = "") { return parse_config("device = \"flat\"\n" + extra); }

inline RunConfig ratchet_config(const std::string& extra = "") {
  return parse_config("device = \"ratchet\"\n" + extra);
}

/// A A^+ / Tr(A A^+) for a Gaussian random A.
inline CMatrix random_density(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = {g(rng), g(rng)};
  }
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline CMatrix random_hermitian(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = {g(rng), g(rng)};
  }
  return 0.5 * (a + a.adjoint());
}

/// Two sites joined by one bond of amplitude t.
inline DeviceSpec dimer(double eps, double t) {
  DeviceSpec d;
  d.sites = {{0, {0.0, 0.0}, eps, Region::HotLead}, {1, {1.0, 0.0}, eps, Region::ColdLead}};
  d.bonds = {{0, 1, t}};
  d.lattice_spacing = 1.0;
  return d;
}

/// exp(-i H t) from an independent eigendecomposition of H.
inline CMatrix unitary(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector phases = (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -t))
                             .array()
                             .exp()
                             .matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qobs::test
