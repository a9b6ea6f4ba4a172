#pragma once

#include <vector>

#include "qobs/bath.hpp"
#include "qobs/dynamics.hpp"
#include "qobs/operators.hpp"

namespace qobs {

// Sign conventions, used everywhere in the library:
//  * Qdot_X is the heat flowing INTO the system from channel X.
//  * Phi_X = Qdot_X / kT_X is the entropy flowing into the system from bath X
//    (k_B = 1). Written with heat flows to the reservoirs, Qres = -Qdot, this
//    is the familiar Phi_X = -Qres_X / T_X.
//  * P_prod = -(Phi_H + Phi_C) = Qres_H/T_H + Qres_C/T_C, which is >= 0.
//  * Currents are positive left -> right; on the top branch that is the
//    clockwise sense of the ring.

struct ObservablesRecord {
  double gamma_D = 0.0;
  double kdT = 0.0;
  double j_p_up = 0.0;
  double j_h_up = 0.0;
  double j_h_down = 0.0;
  double Qdot_H = 0.0;
  double Qdot_C = 0.0;
  double Qdot_D = 0.0;
  double Phi_H = 0.0;
  double Phi_C = 0.0;
  double P_prod = 0.0;
  double S_vn = 0.0;
  double residual = 0.0;
  double min_eig = 0.0;

  // Not part of the CSV schema.
  double j_p_down = 0.0;
  double observer_entropy_flow = 0.0;
  std::vector<double> top_energy_profile;     // bond positions 0..5
  std::vector<double> bottom_energy_profile;  // bond positions 0..5
  std::vector<double> top_particle_profile;
  std::vector<double> bottom_particle_profile;
};

/// Tr(rho (-i)[H, N_L]) = sum over cut bonds (i in L, j not in L) of
/// -2 Im(H_ij rho_ji); for H_ij = -T this is 2T Im rho_ji.
double particle_current(const CMatrix& rho, const HermitianOperator& h, const CutSpec& cut);

/// Particle current through one bond, from i to j.
double bond_particle_current(const CMatrix& rho, const HermitianOperator& h, int i, int j);

/// Tr(rho (-i)[H, H_L]) with H_L from region_energy_operator.
double energy_current(const CMatrix& rho, const DeviceSpec& device, const HermitianOperator& h, const CutSpec& cut);

/// Share of the cut's energy current carried by bond (i, j) of the cut:
/// <(-i/2)[H_R - H_L, B_ij]> with B_ij the hopping term of the bond. The
/// shares over all cut bonds sum to energy_current().
double bond_energy_current(const CMatrix& rho, const DeviceSpec& device, const HermitianOperator& h,
                           const CutSpec& cut, int i, int j);

/// Tr(H D_ch[rho]).
double channel_heat_flow(const CMatrix& rho, const HermitianOperator& h, const DissipatorChannel& channel,
                         DissipatorMode mode);

/// Entropy flowing into the system with heat Qdot from a bath at kT (k_B = 1).
/// Throws std::invalid_argument for kT <= 0.
double entropy_flow(double qdot_in, double kT);

/// P = -(Qdot_H / kT_H + Qdot_C / kT_C) for into-system heat flows.
double entropy_production(const ObservablesRecord& record, double kT_hot, double kT_cold);

/// -Tr(D_obs[rho] ln sigma) with sigma = (1 - eta)|k><k| + eta I/N.
/// Throws std::invalid_argument unless 0 < eta < 1.
double observer_entropy_flow(const CMatrix& rho, int site, double gamma, double eta);

/// -sum p ln p over eigenvalues; negative eigenvalues are clamped to zero.
double vn_entropy(const CMatrix& rho);

struct ObservableContext {
  const DeviceSpec* device = nullptr;
  const PhysParams* params = nullptr;
  const HermitianOperator* hamiltonian = nullptr;
  const std::vector<DissipatorChannel>* channels = nullptr;
  int top_cut = 3;
  int bottom_cut = 3;
};

/// Evaluates every observable for a state. `residual` and `min_eig` are
/// taken from the report when given.
ObservablesRecord evaluate_observables(const ObservableContext& ctx, const CMatrix& rho);

}  // namespace qobs
