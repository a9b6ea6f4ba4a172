#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qobs/bath.hpp"
#include "qobs/operators.hpp"

namespace qobs {

/// Raised when a solve is rejected (degenerate kernel, residual too large,
/// unstable propagation). The message carries the diagnostics.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kNegativityTolerance = 1e-8;
inline constexpr double kResidualTolerance = 1e-9;  // relative to sigma_max(L)

/// N x N density matrix in the site basis. Validity is reported by
/// validate_state() rather than enforced; Redfield-type generators can
/// produce slightly negative states.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(CMatrix rho);

  static DensityMatrix maximally_mixed(Eigen::Index n);
  /// exp(-H/kT) / Z.
  static DensityMatrix gibbs(const SpectralDecomposition& spec, double kT);

  [[nodiscard]] const CMatrix& matrix() const { return rho_; }
  [[nodiscard]] Eigen::Index dim() const { return rho_.rows(); }

 private:
  CMatrix rho_;
};

struct StateDiagnostics {
  double hermiticity_defect = 0.0;
  double trace_deviation = 0.0;  // |Tr rho - 1|
  double min_eigenvalue = 0.0;
  double purity = 0.0;  // Tr rho^2

  [[nodiscard]] bool valid() const {
    return hermiticity_defect <= kStateTolerance && trace_deviation <= kStateTolerance &&
           min_eigenvalue >= -kNegativityTolerance;
  }
};

StateDiagnostics validate_state(const DensityMatrix& rho);

/// Eigenvalues of the Hermitian part of rho, ascending.
RVector state_eigenvalues(const CMatrix& rho);

double trace_distance(const CMatrix& a, const CMatrix& b);

/// Column-stacked vectorization: vec(rho)[i + N j] = rho(i, j).
CVector vectorize(const CMatrix& rho);
CMatrix unvectorize(const CVector& v, Eigen::Index n);

/// N^2 x N^2 generator acting on column-stacked density matrices.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(CMatrix l, Eigen::Index n);

  [[nodiscard]] const CMatrix& matrix() const { return l_; }
  [[nodiscard]] Eigen::Index dim() const { return n_; }
  [[nodiscard]] CMatrix apply(const CMatrix& rho) const;

 private:
  CMatrix l_;
  Eigen::Index n_ = 0;
};

/// Right-hand side -i[H, rho] + sum of dissipators, evaluated directly in
/// matrix form (no vectorization).
CMatrix master_equation_rhs(const HermitianOperator& h, const std::vector<DissipatorChannel>& channels,
                            DissipatorMode mode, const CMatrix& rho);

/// L vec(rho) = vec(-i[H, rho] + sum_ch D_ch[rho]).
Superoperator assemble_liouvillian(const HermitianOperator& h, const std::vector<DissipatorChannel>& channels,
                                   DissipatorMode mode);

struct SteadyStateReport {
  DensityMatrix rho;
  double residual = 0.0;  // ||L vec(rho)||_2
  int nullspace_dim = 0;
  double min_eigenvalue = 0.0;
  double hermiticity_defect = 0.0;  // of the raw null vector, after trace normalization
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double sigma_next = 0.0;  // second-smallest singular value
  bool positivity_warning = false;
};

/// Null vector of L from the smallest singular value, Hermitized and
/// trace-normalized. Throws SolverError if the numerical kernel is not
/// one-dimensional or the residual exceeds kResidualTolerance * sigma_max.
SteadyStateReport steady_state(const Superoperator& l);

/// Eigenvalues of L.
CVector liouvillian_spectrum(const Superoperator& l);

/// Smallest |Re lambda| over eigenvalues of L excluding the stationary one.
double slowest_relaxation_rate(const Superoperator& l);

/// Power-iteration estimate of the largest singular value of L.
double estimate_sigma_max(const Superoperator& l, int iterations = 60);

/// Classical RK4 integration of d rho/dt = L[rho] from rho0 over [0, t_final].
/// The last step is shortened to land on t_final. Stable for
/// dt * sigma_max(L) <= 0.1. Throws SolverError on trace or norm blow-up.
///
/// A fixed-step RK4 step is the linear map M = 1 + hL + (hL)^2/2 + (hL)^3/6
/// + (hL)^4/24, so long runs apply M^n by repeated squaring instead of n
/// matrix-vector steps. Both paths give the same RK4 trajectory.
DensityMatrix propagate(const DensityMatrix& rho0, const Superoperator& l, double t_final, double dt);

}  // namespace qobs
