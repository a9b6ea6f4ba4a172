#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qobs/lattice.hpp"

namespace qobs {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermiticityTolerance = 1e-12;

/// Largest entrywise |A - A^dagger|.
double hermiticity_defect(const CMatrix& m);

/// Complex square matrix equal to its conjugate transpose to within
/// kHermiticityTolerance (absolute, entrywise). Construction checks this.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  /// Throws std::invalid_argument if `m` is not square or not Hermitian.
  explicit HermitianOperator(CMatrix m);

  [[nodiscard]] const CMatrix& matrix() const { return m_; }
  [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

struct SpectralDecomposition {
  RVector energies;  // ascending
  CMatrix vectors;   // orthonormal columns
};

/// A set of sites L and the bonds leaving it. Positive flow is out of L.
struct CutSpec {
  std::vector<int> left_sites;                // sorted
  std::vector<std::pair<int, int>> bonds;     // (i in L, j not in L)
};

enum class Axis { X, Y };

/// H_ii = eps_i, H_ij = -T for every bond.
HermitianOperator assemble_hamiltonian(const DeviceSpec& device);

/// Throws std::runtime_error with conditioning diagnostics on failure.
SpectralDecomposition eigendecompose(const HermitianOperator& h);

/// Diagonal -(r_i . u_axis) on the sites of `region`, zero elsewhere.
/// Positions are taken relative to the device centroid.
HermitianOperator dipole_coupling_operator(const DeviceSpec& device, Region region, Axis axis);

/// |k><k|. Throws std::invalid_argument for an invalid site.
HermitianOperator site_projector(const DeviceSpec& device, int k);

/// Diagonal 1 on `sites`, 0 elsewhere.
HermitianOperator region_number_operator(const DeviceSpec& device, const std::vector<int>& sites);

/// Energy contained in `sites`: onsite terms of L, full hopping terms of
/// bonds inside L and half of every hopping term that crosses the boundary.
/// Summing over a partition of the sites reproduces H exactly.
HermitianOperator region_energy_operator(const DeviceSpec& device, const HermitianOperator& h,
                                         const std::vector<int>& sites);

/// J = -i[H, A]. <J> is the coherent rate at which <A> leaves its region.
HermitianOperator current_generator(const HermitianOperator& h, const HermitianOperator& a);

/// Builds the cut for a site set: every bond with exactly one endpoint in L.
CutSpec make_cut(const DeviceSpec& device, std::vector<int> left_sites);

/// Cut through both branches at the given bond positions (0..5, see
/// CutSelection). L holds the hot lead and the branch sites left of each cut.
CutSpec branch_cut(const DeviceSpec& device, int top_position, int bottom_position);

/// Endpoints (left, right) of the bond at `position` along `branch`.
std::pair<int, int> branch_bond(const DeviceSpec& device, Branch branch, int position);

/// Permutation matrix P with P|i> = |perm[i]>.
CMatrix permutation_matrix(const std::vector<int>& perm);

}  // namespace qobs
