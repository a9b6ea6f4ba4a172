#include "qobs/dynamics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace qobs {

namespace {

using Complex = std::complex<double>;

// L += scale * (B^T kron A), i.e. the action rho -> scale * A rho B.
void add_sandwich(CMatrix& l, const CMatrix& a, const CMatrix& b, Complex scale) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index d = 0; d < n; ++d) {
    for (Eigen::Index b_row = 0; b_row < n; ++b_row) {
      const Complex bt = scale * b(d, b_row);  // (B^T)(b_row, d)
      if (bt == Complex(0.0)) continue;
      l.block(b_row * n, d * n, n, n) += bt * a;
    }
  }
}


// Orthonormal basis of Hermitian matrices in vec space: |i><i|,
// (|i><j| + |j><i|)/sqrt2 and i(|i><j| - |j><i|)/sqrt2. Column k of the basis
// has at most two nonzero entries.
struct BasisColumn {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  Complex ca;
  Complex cb;
};

std::vector<BasisColumn> hermitian_basis(Eigen::Index n) {
  const double s = std::sqrt(0.5);
  std::vector<BasisColumn> basis;
  basis.reserve(n * n);
  for (Eigen::Index i = 0; i < n; ++i) basis.push_back({i + n * i, i + n * i, 1.0, 0.0});
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      basis.push_back({i + n * j, j + n * i, s, s});
      basis.push_back({i + n * j, j + n * i, Complex(0.0, s), Complex(0.0, -s)});
    }
  }
  return basis;
}

// B^+ L B when it is real, i.e. when L maps Hermitian matrices to Hermitian
// matrices; nullopt otherwise.
std::optional<Eigen::MatrixXd> real_representation(const CMatrix& l, const std::vector<BasisColumn>& basis) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  CMatrix lb(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& c = basis[k];
    lb.col(k) = c.ca * l.col(c.a) + c.cb * l.col(c.b);
  }
  CMatrix rep(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& c = basis[k];
    rep.row(k) = std::conj(c.ca) * lb.row(c.a) + std::conj(c.cb) * lb.row(c.b);
  }
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if (rep.imag().cwiseAbs().maxCoeff() > 1e-12 * scale) return std::nullopt;
  return Eigen::MatrixXd(rep.real());
}


// Iterative refinement of a kernel vector of the real representation. The
// first n basis vectors are the diagonal projectors, so trace preservation
// makes the rows of R sum to zero over them; replacing row 0 by the trace
// functional gives a nonsingular system A v = e_0 when the kernel is
// one-dimensional. Residuals are accumulated in extended precision, which
// brings small components (bond coherences) to full relative accuracy.
Eigen::VectorXd refine_null_vector(const Eigen::MatrixXd& r, Eigen::VectorXd v, Eigen::Index n) {
  Eigen::MatrixXd a = r;
  a.row(0).setZero();
  a.row(0).head(n).setOnes();
  const double trace = v.head(n).sum();
  if (std::abs(trace) < 1e-300) return v;
  v /= trace;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::Index m = a.rows();
  Eigen::VectorXd residual(m);
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < m; ++i) {
      long double acc = i == 0 ? 1.0L : 0.0L;
      for (Eigen::Index j = 0; j < m; ++j) acc -= static_cast<long double>(a(i, j)) * v(j);
      residual(i) = static_cast<double>(acc);
    }
    v += lu.solve(residual);
  }
  return v;
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) throw std::invalid_argument("density matrix must be square");
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix DensityMatrix::gibbs(const SpectralDecomposition& spec, double kT) {
  if (!(kT > 0.0)) throw std::invalid_argument("Gibbs state needs kT > 0");
  const double e0 = spec.energies.minCoeff();
  RVector w = ((spec.energies.array() - e0) * (-1.0 / kT)).exp();
  w /= w.sum();
  CMatrix rho = spec.vectors * w.cast<Complex>().asDiagonal() * spec.vectors.adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

RVector state_eigenvalues(const CMatrix& rho) {
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

StateDiagnostics validate_state(const DensityMatrix& rho) {
  const CMatrix& m = rho.matrix();
  StateDiagnostics d;
  d.hermiticity_defect = hermiticity_defect(m);
  d.trace_deviation = std::abs(m.trace() - Complex(1.0));
  d.min_eigenvalue = m.size() ? state_eigenvalues(m).minCoeff() : 0.0;
  d.purity = (m * m).trace().real();
  return d;
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  return 0.5 * state_eigenvalues(a - b).cwiseAbs().sum();
}

CVector vectorize(const CMatrix& rho) { return Eigen::Map<const CVector>(rho.data(), rho.size()); }

CMatrix unvectorize(const CVector& v, Eigen::Index n) {
  if (v.size() != n * n) throw std::invalid_argument("vector length is not N^2");
  return Eigen::Map<const CMatrix>(v.data(), n, n);
}

Superoperator::Superoperator(CMatrix l, Eigen::Index n) : l_(std::move(l)), n_(n) {
  if (l_.rows() != n * n || l_.cols() != n * n) throw std::invalid_argument("superoperator must be N^2 x N^2");
}

CMatrix Superoperator::apply(const CMatrix& rho) const {
  if (rho.rows() != n_ || rho.cols() != n_) throw std::invalid_argument("state dimension mismatch");
  return unvectorize(l_ * vectorize(rho), n_);
}

CMatrix master_equation_rhs(const HermitianOperator& h, const std::vector<DissipatorChannel>& channels,
                            DissipatorMode mode, const CMatrix& rho) {
  const CMatrix& hm = h.matrix();
  CMatrix out = Complex(0.0, -1.0) * (hm * rho - rho * hm);
  for (const auto& ch : channels) out += apply_dissipator(ch, rho, mode);
  return out;
}

Superoperator assemble_liouvillian(const HermitianOperator& h, const std::vector<DissipatorChannel>& channels,
                                   DissipatorMode mode) {
  const Eigen::Index n = h.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix l = CMatrix::Zero(n * n, n * n);
  const Complex i(0.0, 1.0);

  add_sandwich(l, h.matrix(), id, -i);
  add_sandwich(l, id, h.matrix(), i);

  for (const auto& ch : channels) {
    if (channel_dim(ch) != n) throw std::invalid_argument("channel dimension does not match Hamiltonian");
    if (const auto* th = std::get_if<ThermalChannel>(&ch)) {
      const CMatrix& s = th->coupling.matrix();
      const CMatrix& k = th->kernel;
      const CMatrix kb = mode == DissipatorMode::Hermitian ? CMatrix(k.adjoint()) : k;
      add_sandwich(l, k, s, 1.0);
      add_sandwich(l, s, kb, 1.0);
      add_sandwich(l, s * k, id, -1.0);
      add_sandwich(l, id, kb * s, -1.0);
    } else {
      const auto& obs = std::get<ObserverChannel>(ch);
      CMatrix p = CMatrix::Zero(n, n);
      p(obs.site, obs.site) = 1.0;
      const double g2 = obs.gamma * obs.gamma;
      add_sandwich(l, p, p, 2.0 * g2);
      add_sandwich(l, p, id, -g2);
      add_sandwich(l, id, p, -g2);
    }
  }
  return Superoperator(std::move(l), n);
}

SteadyStateReport steady_state(const Superoperator& l) {
  const Eigen::Index n = l.dim();
  // The singular values of L and of its real representation coincide (the
  // basis is unitary); the real decomposition is several times cheaper.
  RVector sv;
  CVector null_vector;
  const auto basis = hermitian_basis(n);
  const auto rep = real_representation(l.matrix(), basis);
  Eigen::VectorXd v;
  if (rep) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(*rep, Eigen::ComputeThinV);
    sv = svd.singularValues();
    v = svd.matrixV().col(sv.size() - 1);
  } else {
    Eigen::BDCSVD<CMatrix> svd(l.matrix(), Eigen::ComputeThinV);
    sv = svd.singularValues();
    null_vector = svd.matrixV().col(sv.size() - 1);
  }
  const Eigen::Index m = sv.size();

  SteadyStateReport report;
  report.sigma_max = sv(0);
  report.sigma_min = sv(m - 1);
  report.sigma_next = m > 1 ? sv(m - 2) : 0.0;
  const double threshold = kResidualTolerance * report.sigma_max;
  report.nullspace_dim = static_cast<int>((sv.array() <= threshold).count());
  if (report.nullspace_dim != 1) {
    throw SolverError(fmt::format(
        "steady state is not unique: numerical kernel dimension {} (smallest singular values {:.3e}, {:.3e}; "
        "threshold {:.3e})",
        report.nullspace_dim, report.sigma_min, report.sigma_next, threshold));
  }

  if (rep) {
    v = refine_null_vector(*rep, v, n);
    null_vector = CVector::Zero(n * n);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      null_vector(basis[k].a) += basis[k].ca * v(k);
      null_vector(basis[k].b) += basis[k].cb * v(k);
    }
  }

  CMatrix rho = unvectorize(null_vector, n);
  const Complex trace = rho.trace();
  if (std::abs(trace) < 1e-300) throw SolverError("steady-state null vector is traceless");
  rho /= trace;
  report.hermiticity_defect = hermiticity_defect(rho);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  rho /= rho.trace().real();

  report.residual = (l.matrix() * vectorize(rho)).norm();
  if (report.residual > threshold) {
    throw SolverError(fmt::format("steady-state residual {:.3e} exceeds {:.3e} (sigma_max {:.3e})", report.residual,
                                  threshold, report.sigma_max));
  }
  report.min_eigenvalue = state_eigenvalues(rho).minCoeff();
  report.positivity_warning = report.min_eigenvalue < -kNegativityTolerance;
  report.rho = DensityMatrix(std::move(rho));
  return report;
}

CVector liouvillian_spectrum(const Superoperator& l) {
  if (const auto rep = real_representation(l.matrix(), hermitian_basis(l.dim()))) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(*rep, false);
    if (solver.info() != Eigen::Success) throw SolverError("Liouvillian eigensolver did not converge");
    return solver.eigenvalues();
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(l.matrix(), false);
  if (solver.info() != Eigen::Success) throw SolverError("Liouvillian eigensolver did not converge");
  return solver.eigenvalues();
}

double slowest_relaxation_rate(const Superoperator& l) {
  const CVector ev = liouvillian_spectrum(l);
  Eigen::Index stationary = 0;
  ev.cwiseAbs().minCoeff(&stationary);
  double rate = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (k == stationary) continue;
    rate = std::min(rate, -ev(k).real());
  }
  return rate;
}

double estimate_sigma_max(const Superoperator& l, int iterations) {
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  CVector v(l.matrix().cols());
  for (auto& x : v) x = Complex(normal(rng), normal(rng));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const CVector w = l.matrix().adjoint() * (l.matrix() * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    sigma = std::sqrt(norm);
    v = w / norm;
  }
  return sigma;
}

namespace {

// Stepping beyond this many steps switches to squaring of the step map.
constexpr long long kDirectStepLimit = 4096;

CMatrix rk4_step_map(const CMatrix& lm, double h) {
  const Eigen::Index m = lm.rows();
  const CMatrix hl = h * lm;
  CMatrix p = CMatrix::Identity(m, m) + hl / 4.0;
  p = CMatrix::Identity(m, m) + (hl * p) / 3.0;
  p = CMatrix::Identity(m, m) + (hl * p) / 2.0;
  return CMatrix::Identity(m, m) + hl * p;
}

struct DriftCheck {
  Eigen::Index n;
  Complex trace0;
  double norm0;

  void operator()(const CVector& y, long long step, double t, double dt) const {
    Complex trace(0.0);
    for (Eigen::Index i = 0; i < n; ++i) trace += y(i + n * i);
    const double drift = std::abs(trace - trace0);
    const double growth = y.norm() / norm0;
    if (!std::isfinite(growth) || growth > 1e3 || drift > 1e-6 * std::max(1.0, t)) {
      throw SolverError(fmt::format(
          "propagation unstable at step {} (t = {:.6e}, dt = {:.3e}): trace drift {:.3e}, norm growth {:.3e}", step,
          t, dt, drift, growth));
    }
  }
};

}  // namespace

DensityMatrix propagate(const DensityMatrix& rho0, const Superoperator& l, double t_final, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("propagate: t_final must be non-negative");
  if (rho0.dim() != l.dim()) throw std::invalid_argument("propagate: state dimension mismatch");
  if (t_final == 0.0) return rho0;

  const CMatrix& lm = l.matrix();
  const Eigen::Index n = l.dim();
  CVector y = vectorize(rho0.matrix());
  const DriftCheck check{n, rho0.matrix().trace(), std::max(y.norm(), 1e-300)};

  const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-12));
  const double last = t_final - static_cast<double>(steps - 1) * dt;

  if (steps > kDirectStepLimit) {
    // Full steps first, by binary powers of the step map, then the last one.
    long long remaining = steps - 1;
    long long done = 0;
    CMatrix power = rk4_step_map(lm, dt);
    for (long long bit = 1; remaining > 0; bit <<= 1) {
      if (remaining & bit) {
        y = power * y;
        done += bit;
        remaining -= bit;
        check(y, done, static_cast<double>(done) * dt, dt);
      }
      if (remaining > 0) power = (power * power).eval();
    }
    y = rk4_step_map(lm, last) * y;
    check(y, steps, t_final, dt);
    return DensityMatrix(unvectorize(y, n));
  }

  CVector k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size());
  double t = 0.0;
  for (long long step = 0; step < steps; ++step) {
    const double h = step + 1 == steps ? last : dt;
    k1.noalias() = lm * y;
    k2.noalias() = lm * (y + 0.5 * h * k1);
    k3.noalias() = lm * (y + 0.5 * h * k2);
    k4.noalias() = lm * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    if (step % 64 == 63 || step + 1 == steps) check(y, step + 1, t, dt);
  }
  return DensityMatrix(unvectorize(y, n));
}

}  // namespace qobs
