#include "qobs/bath.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace qobs {

double bose_einstein(double omega, double kT) {
  if (!(omega > 0.0)) throw std::domain_error(fmt::format("bose_einstein: omega must be positive, got {}", omega));
  if (!(kT > 0.0)) throw std::domain_error(fmt::format("bose_einstein: kT must be positive, got {}", kT));
  return 1.0 / std::expm1(omega / kT);
}

double spectral_weight(double omega, const BathSpectrum& bath) {
  const double magnitude = std::abs(omega);
  if (magnitude <= bath.omega_floor || magnitude >= bath.omega_c) return 0.0;
  if (bath.kT <= 0.0) {
    // Zero-temperature limit: only emission survives.
    return omega > 0.0 ? 0.0 : 1.0 / bath.eps0;
  }
  const double n = bose_einstein(magnitude, bath.kT);
  return (omega > 0.0 ? n : n + 1.0) / bath.eps0;
}

CMatrix assemble_kernel(const HermitianOperator& s, const SpectralDecomposition& spec,
                        const BathSpectrum& bath, double lambda) {
  const Eigen::Index n = s.dim();
  if (spec.vectors.rows() != n) throw std::invalid_argument("spectral decomposition does not match S");
  const CMatrix& v = spec.vectors;
  CMatrix k = v.adjoint() * s.matrix() * v;
  const double l2 = lambda * lambda;
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = 0; row < n; ++row) {
      k(row, col) *= l2 * spectral_weight(spec.energies(row) - spec.energies(col), bath);
    }
  }
  return v * k * v.adjoint();
}

double default_cutoff(const SpectralDecomposition& spec) {
  const auto& e = spec.energies;
  return 2.0 * (e.maxCoeff() - e.minCoeff());
}

std::vector<DissipatorChannel> thermal_channels(const DeviceSpec& device, const PhysParams& params,
                                                const SpectralDecomposition& spec) {
  const double omega_c = params.omega_c.value_or(default_cutoff(spec));
  std::vector<DissipatorChannel> out;
  out.reserve(4);
  for (BathSide side : {BathSide::Hot, BathSide::Cold}) {
    const double kT = side == BathSide::Hot ? params.kT_hot() : params.kT_cold();
    const BathSpectrum bath{kT, omega_c, params.eps0, params.omega_floor};
    const Region region = side == BathSide::Hot ? Region::HotLead : Region::ColdLead;
    for (Axis axis : {Axis::X, Axis::Y}) {
      auto s = dipole_coupling_operator(device, region, axis);
      CMatrix k = assemble_kernel(s, spec, bath, params.lambda);
      out.emplace_back(ThermalChannel{std::move(s), std::move(k), kT, side, axis});
    }
  }
  return out;
}

ObserverChannel observer_channel(const DeviceSpec& device, int site, double gamma) {
  if (site < 0 || site >= device.size()) throw std::invalid_argument(fmt::format("invalid observer site {}", site));
  if (!(gamma >= 0.0)) throw std::invalid_argument("observer gamma must be non-negative");
  return {site, gamma, device.size()};
}

Eigen::Index channel_dim(const DissipatorChannel& channel) {
  return std::visit(
      [](const auto& ch) -> Eigen::Index {
        using T = std::decay_t<decltype(ch)>;
        if constexpr (std::is_same_v<T, ThermalChannel>) {
          return ch.coupling.dim();
        } else {
          return ch.dim;
        }
      },
      channel);
}

CMatrix apply_dissipator(const DissipatorChannel& channel, const CMatrix& rho, DissipatorMode mode) {
  const Eigen::Index n = channel_dim(channel);
  if (rho.rows() != n || rho.cols() != n) {
    throw std::invalid_argument(
        fmt::format("dissipator dimension {} does not match state {}x{}", n, rho.rows(), rho.cols()));
  }
  if (const auto* th = std::get_if<ThermalChannel>(&channel)) {
    const CMatrix& s = th->coupling.matrix();
    const CMatrix& k = th->kernel;
    const CMatrix kb = mode == DissipatorMode::Hermitian ? CMatrix(k.adjoint()) : k;
    return k * rho * s + s * rho * kb - s * k * rho - rho * kb * s;
  }
  const auto& obs = std::get<ObserverChannel>(channel);
  // gamma^2 (2 P rho P - P rho - rho P): row and column k lose their
  // off-diagonal entries at rate gamma^2, everything else is untouched.
  CMatrix out = CMatrix::Zero(n, n);
  const double g2 = obs.gamma * obs.gamma;
  const Eigen::Index k = obs.site;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == k) continue;
    out(k, j) = -g2 * rho(k, j);
    out(j, k) = -g2 * rho(j, k);
  }
  return out;
}

}  // namespace qobs
