#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qobs {

enum class Region { HotLead, ColdLead, TopBranch, BottomBranch };

/// The four branch-end sites: alpha/beta are the left/right ends of the top
/// branch, gamma/delta the left/right ends of the bottom branch.
enum class NamedSite { Alpha, Beta, Gamma, Delta };

enum class Branch { Top, Bottom };

enum class DeviceKind { Flat, Ratchet };

enum class DissipatorMode { Hermitian, Literal };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct SiteSpec {
  int id = 0;
  Vec2 position;        // bohr
  double onsite = 0.0;  // hartree
  Region region = Region::HotLead;

  friend bool operator==(const SiteSpec&, const SiteSpec&) = default;
};

/// Nearest-neighbour bond with i < j. `hopping` is the positive amplitude T;
/// the Hamiltonian element is -T.
struct Bond {
  int i = 0;
  int j = 0;
  double hopping = 0.0;

  friend bool operator==(const Bond&, const Bond&) = default;
};

struct DeviceSpec {
  std::vector<SiteSpec> sites;
  std::vector<Bond> bonds;
  std::array<int, 4> named{};  // indexed by NamedSite
  double lattice_spacing = 0.03;

  [[nodiscard]] int size() const { return static_cast<int>(sites.size()); }
  [[nodiscard]] int site(NamedSite name) const { return named[static_cast<int>(name)]; }
  [[nodiscard]] std::vector<int> region_sites(Region region) const;
  /// Branch sites ordered left to right.
  [[nodiscard]] std::vector<int> branch_path(Branch branch) const;
  [[nodiscard]] std::vector<double> onsite_energies() const;

  friend bool operator==(const DeviceSpec&, const DeviceSpec&) = default;
};

/// Physical parameters, all in hartree atomic units.
struct PhysParams {
  double eps0 = 0.0;
  double hopping = 0.0;
  double lambda = 0.0;
  double kT_E = 0.008;
  double kdT = 0.0;
  std::optional<double> omega_c;  // unset: twice the spectral width of H
  double gamma_D = 0.0;
  std::optional<int> observer_site;
  double omega_floor = 5e-4;
  DissipatorMode mode = DissipatorMode::Hermitian;
  double lattice_spacing = 0.03;

  [[nodiscard]] double kT_hot() const { return kT_E + kdT; }
  [[nodiscard]] double kT_cold() const { return kT_E - kdT; }

  /// The parameter set used throughout: eps0 = 1 eV, hopping = eps0 / 2,
  /// lambda = 0.2 sqrt(eps0), k_B T_E = 0.008 hartree.
  static PhysParams defaults();

  friend bool operator==(const PhysParams&, const PhysParams&) = default;
};

/// Throws std::invalid_argument naming the violated constraint.
void validate(const PhysParams& params);
void validate(const DeviceSpec& device);

/// 28 sites: two 3x3 leads joined by two 5-site branches attached at the
/// lead corners. Uniform onsite energy eps0 and hopping.
DeviceSpec build_flat_device(const PhysParams& params);

/// Same graph as the flat device. Top branch onsite energies climb in
/// 0.1 eV steps from eps0 + 0.1 eV (alpha) to eps0 + 0.5 eV (beta); the bottom
/// branch ladder runs the other way (gamma high, delta low).
DeviceSpec build_ratchet_device(const PhysParams& params);

DeviceSpec build_device(DeviceKind kind, const PhysParams& params);

/// Permutation of site ids implementing the top<->bottom mirror (y -> -y).
std::vector<int> vertical_mirror(const DeviceSpec& device);
/// Permutation of site ids implementing the left<->right mirror (x -> -x).
std::vector<int> horizontal_mirror(const DeviceSpec& device);

bool is_connected(const DeviceSpec& device);

std::string_view to_string(NamedSite name);
std::string_view to_string(Region region);
std::string_view to_string(DeviceKind kind);
std::string_view to_string(DissipatorMode mode);
std::optional<NamedSite> parse_named_site(std::string_view name);

}  // namespace qobs
