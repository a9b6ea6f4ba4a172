#include "qobs/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

#include "qobs/units.hpp"

namespace qobs {

namespace {

constexpr int kLeadWidth = 3;
constexpr int kBranchLength = 5;
constexpr double kLadderStepEv = 0.1;

Vec2 centroid(const DeviceSpec& device) {
  Vec2 c;
  for (const auto& s : device.sites) {
    c.x += s.position.x;
    c.y += s.position.y;
  }
  const double n = static_cast<double>(device.sites.size());
  return {c.x / n, c.y / n};
}

std::vector<int> mirror(const DeviceSpec& device, bool flip_x, bool flip_y) {
  const Vec2 c = centroid(device);
  const double tol = 1e-9 * std::max(1.0, device.lattice_spacing);
  std::vector<int> perm(device.sites.size(), -1);
  for (const auto& s : device.sites) {
    const Vec2 target{flip_x ? 2.0 * c.x - s.position.x : s.position.x,
                      flip_y ? 2.0 * c.y - s.position.y : s.position.y};
    for (const auto& t : device.sites) {
      if (std::abs(t.position.x - target.x) < tol && std::abs(t.position.y - target.y) < tol) {
        perm[s.id] = t.id;
        break;
      }
    }
    if (perm[s.id] < 0) {
      throw std::invalid_argument("device has no mirror image for site " + std::to_string(s.id));
    }
  }
  return perm;
}

}  // namespace

std::vector<int> DeviceSpec::region_sites(Region region) const {
  std::vector<int> out;
  for (const auto& s : sites) {
    if (s.region == region) out.push_back(s.id);
  }
  return out;
}

std::vector<int> DeviceSpec::branch_path(Branch branch) const {
  auto path = region_sites(branch == Branch::Top ? Region::TopBranch : Region::BottomBranch);
  std::stable_sort(path.begin(), path.end(), [this](int a, int b) {
    return sites[a].position.x < sites[b].position.x;
  });
  return path;
}

std::vector<double> DeviceSpec::onsite_energies() const {
  std::vector<double> out;
  out.reserve(sites.size());
  for (const auto& s : sites) out.push_back(s.onsite);
  return out;
}

PhysParams PhysParams::defaults() {
  PhysParams p;
  p.eps0 = ev_to_hartree(1.0);
  p.hopping = ev_to_hartree(0.5);
  p.lambda = 0.2 * std::sqrt(p.eps0);
  return p;
}

void validate(const PhysParams& p) {
  if (!(p.kT_E > 0.0)) throw std::invalid_argument("kT_E must be positive");
  if (!(p.kdT >= 0.0)) throw std::invalid_argument("kdT must be non-negative");
  if (!(p.kT_E > p.kdT)) throw std::invalid_argument("temperature of cold bath must be positive");
  if (p.omega_c && !(*p.omega_c > 0.0)) throw std::invalid_argument("omega_c must be positive");
  if (!(p.gamma_D >= 0.0)) throw std::invalid_argument("observer gamma must be non-negative");
  if (!(p.omega_floor >= 0.0)) throw std::invalid_argument("omega_floor must be non-negative");
  if (!(p.eps0 > 0.0)) throw std::invalid_argument("eps0 must be positive");
  if (!(p.lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  if (!(p.lattice_spacing > 0.0)) throw std::invalid_argument("lattice_spacing must be positive");
}

void validate(const DeviceSpec& device) {
  const int n = device.size();
  if (n == 0) throw std::invalid_argument("device has no sites");
  for (int i = 0; i < n; ++i) {
    if (device.sites[i].id != i) throw std::invalid_argument("site ids must be contiguous 0..N-1");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& b : device.bonds) {
    if (b.i < 0 || b.j < 0 || b.i >= n || b.j >= n) {
      throw std::invalid_argument("bond endpoint out of range");
    }
    if (b.i == b.j) throw std::invalid_argument("self-bond at site " + std::to_string(b.i));
    if (b.i > b.j) throw std::invalid_argument("bond endpoints must satisfy i < j");
    if (!seen.insert({b.i, b.j}).second) {
      throw std::invalid_argument("duplicate bond " + std::to_string(b.i) + "-" + std::to_string(b.j));
    }
  }
  if (device.region_sites(Region::HotLead).size() != 9 ||
      device.region_sites(Region::ColdLead).size() != 9) {
    throw std::invalid_argument("each lead must hold exactly 9 sites");
  }
  for (Branch br : {Branch::Top, Branch::Bottom}) {
    const auto path = device.branch_path(br);
    if (path.empty()) throw std::invalid_argument("empty branch");
    // Restricted to the branch, the bond graph must be exactly the path.
    const std::set<int> members(path.begin(), path.end());
    std::set<std::pair<int, int>> internal;
    for (const auto& b : device.bonds) {
      if (members.count(b.i) && members.count(b.j)) internal.insert({b.i, b.j});
    }
    if (internal.size() != path.size() - 1) throw std::invalid_argument("branch is not a simple path");
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const auto key = std::minmax(path[k], path[k + 1]);
      if (!internal.count({key.first, key.second})) {
        throw std::invalid_argument("branch is not a simple path");
      }
    }
  }
  if (!is_connected(device)) throw std::invalid_argument("device graph is not connected");
  const auto top = device.branch_path(Branch::Top);
  const auto bottom = device.branch_path(Branch::Bottom);
  const std::array<int, 4> expected{top.front(), top.back(), bottom.front(), bottom.back()};
  if (device.named != expected) throw std::invalid_argument("named sites do not match branch ends");
}

DeviceSpec build_flat_device(const PhysParams& params) {
  validate(params);
  DeviceSpec d;
  d.lattice_spacing = params.lattice_spacing;
  const double a = params.lattice_spacing;

  auto add_site = [&](double x, double y, Region region) {
    const int id = d.size();
    d.sites.push_back({id, {x * a, y * a}, params.eps0, region});
    return id;
  };
  auto add_bond = [&](int i, int j) {
    d.bonds.push_back({std::min(i, j), std::max(i, j), params.hopping});
  };
  // 3x3 block with its lower-left corner at (x0, -1); returns ids indexed [col][row].
  auto add_lead = [&](int x0, Region region) {
    std::array<std::array<int, kLeadWidth>, kLeadWidth> ids{};
    for (int cx = 0; cx < kLeadWidth; ++cx) {
      for (int cy = 0; cy < kLeadWidth; ++cy) ids[cx][cy] = add_site(x0 + cx, cy - 1, region);
    }
    for (int cx = 0; cx < kLeadWidth; ++cx) {
      for (int cy = 0; cy < kLeadWidth; ++cy) {
        if (cx + 1 < kLeadWidth) add_bond(ids[cx][cy], ids[cx + 1][cy]);
        if (cy + 1 < kLeadWidth) add_bond(ids[cx][cy], ids[cx][cy + 1]);
      }
    }
    return ids;
  };
  auto add_branch = [&](int y, Region region) {
    std::array<int, kBranchLength> ids{};
    for (int k = 0; k < kBranchLength; ++k) ids[k] = add_site(kLeadWidth + k, y, region);
    for (int k = 0; k + 1 < kBranchLength; ++k) add_bond(ids[k], ids[k + 1]);
    return ids;
  };

  const auto left = add_lead(0, Region::HotLead);
  const auto top = add_branch(1, Region::TopBranch);
  const auto bottom = add_branch(-1, Region::BottomBranch);
  const auto right = add_lead(kLeadWidth + kBranchLength, Region::ColdLead);

  constexpr int last = kLeadWidth - 1;
  add_bond(left[last][2], top.front());
  add_bond(left[last][0], bottom.front());
  add_bond(top.back(), right[0][2]);
  add_bond(bottom.back(), right[0][0]);

  std::sort(d.bonds.begin(), d.bonds.end(),
            [](const Bond& x, const Bond& y) { return std::pair(x.i, x.j) < std::pair(y.i, y.j); });

  d.named = {top.front(), top.back(), bottom.front(), bottom.back()};
  validate(d);
  return d;
}

DeviceSpec build_ratchet_device(const PhysParams& params) {
  DeviceSpec d = build_flat_device(params);
  const double step = ev_to_hartree(kLadderStepEv);
  const auto top = d.branch_path(Branch::Top);
  const auto bottom = d.branch_path(Branch::Bottom);
  const int len = static_cast<int>(top.size());
  for (int k = 0; k < len; ++k) {
    d.sites[top[k]].onsite = params.eps0 + (k + 1) * step;
    d.sites[bottom[k]].onsite = params.eps0 + (len - k) * step;
  }
  return d;
}

DeviceSpec build_device(DeviceKind kind, const PhysParams& params) {
  return kind == DeviceKind::Flat ? build_flat_device(params) : build_ratchet_device(params);
}

std::vector<int> vertical_mirror(const DeviceSpec& device) { return mirror(device, false, true); }

std::vector<int> horizontal_mirror(const DeviceSpec& device) { return mirror(device, true, false); }

bool is_connected(const DeviceSpec& device) {
  const int n = device.size();
  if (n == 0) return true;
  std::vector<std::vector<int>> adj(n);
  for (const auto& b : device.bonds) {
    adj[b.i].push_back(b.j);
    adj[b.j].push_back(b.i);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int count = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        frontier.push(w);
      }
    }
  }
  return count == n;
}

std::string_view to_string(NamedSite name) {
  switch (name) {
    case NamedSite::Alpha:
      return "alpha";
    case NamedSite::Beta:
      return "beta";
    case NamedSite::Gamma:
      return "gamma";
    case NamedSite::Delta:
      return "delta";
  }
  return "?";
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::HotLead:
      return "hot_lead";
    case Region::ColdLead:
      return "cold_lead";
    case Region::TopBranch:
      return "top_branch";
    case Region::BottomBranch:
      return "bottom_branch";
  }
  return "?";
}

std::string_view to_string(DeviceKind kind) { return kind == DeviceKind::Flat ? "flat" : "ratchet"; }

std::string_view to_string(DissipatorMode mode) {
  return mode == DissipatorMode::Hermitian ? "hermitian" : "literal";
}

std::optional<NamedSite> parse_named_site(std::string_view name) {
  if (name == "alpha" || name == "α") return NamedSite::Alpha;
  if (name == "beta" || name == "β") return NamedSite::Beta;
  if (name == "gamma" || name == "γ") return NamedSite::Gamma;
  if (name == "delta" || name == "δ") return NamedSite::Delta;
  return std::nullopt;
}

}  // namespace qobs
