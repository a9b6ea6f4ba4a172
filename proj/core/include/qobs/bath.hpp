#pragma once

#include <variant>
#include <vector>

#include "qobs/lattice.hpp"
#include "qobs/operators.hpp"

namespace qobs {

enum class BathSide { Hot, Cold };

/// Parameters of the flat-with-cutoff bath spectrum.
struct BathSpectrum {
  double kT = 0.0;
  double omega_c = 0.0;
  double eps0 = 0.0;
  double omega_floor = 0.0;
};

struct ThermalChannel {
  HermitianOperator coupling;  // S
  CMatrix kernel;              // K, site basis
  double kT = 0.0;
  BathSide side = BathSide::Hot;
  Axis axis = Axis::X;
};

/// Local dephasing at `site` with strength gamma (rate gamma^2).
struct ObserverChannel {
  int site = 0;
  double gamma = 0.0;
  Eigen::Index dim = 0;
};

using DissipatorChannel = std::variant<ThermalChannel, ObserverChannel>;

/// 1 / (exp(omega / kT) - 1). Throws std::domain_error unless omega > 0 and kT > 0.
double bose_einstein(double omega, double kT);

/// Fourier transform of the bath correlation function at frequency Omega:
///   n_B(Omega)/eps0        for  floor <  Omega < omega_c  (absorption)
///   (n_B(|Omega|)+1)/eps0  for -omega_c < Omega < -floor  (emission)
///   0                      otherwise.
double spectral_weight(double omega, const BathSpectrum& bath);

/// K = lambda^2 * integral C(tau) e^{-iH tau} S e^{iH tau} dtau, evaluated in
/// the eigenbasis as K_mn = lambda^2 S~_mn C^(E_m - E_n) and rotated back.
CMatrix assemble_kernel(const HermitianOperator& s, const SpectralDecomposition& spec,
                        const BathSpectrum& bath, double lambda);

/// Default cutoff: twice the spectral width of H.
double default_cutoff(const SpectralDecomposition& spec);

/// Four channels: (Hot, x), (Hot, y), (Cold, x), (Cold, y).
std::vector<DissipatorChannel> thermal_channels(const DeviceSpec& device, const PhysParams& params,
                                                const SpectralDecomposition& spec);

ObserverChannel observer_channel(const DeviceSpec& device, int site, double gamma);

/// Dissipator of one channel applied to rho.
///  Thermal, literal:   K rho S + S rho K - S K rho - rho K S
///  Thermal, hermitian: K rho S + S rho K^+ - S K rho - rho K^+ S
///  Observer:           gamma^2 (2 P rho P - P rho - rho P)
/// Throws std::invalid_argument on dimension mismatch.
CMatrix apply_dissipator(const DissipatorChannel& channel, const CMatrix& rho, DissipatorMode mode);

Eigen::Index channel_dim(const DissipatorChannel& channel);

}  // namespace qobs
