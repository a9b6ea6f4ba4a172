#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "qobs/lattice.hpp"
#include "qobs/units.hpp"

namespace qobs {
namespace {

std::string message_of(const DeviceSpec& d) {
  try {
    validate(d);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

std::string message_of(const PhysParams& p) {
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

TEST(Lattice, FlatDeviceShape) {
  const auto d = build_flat_device(PhysParams::defaults());
  EXPECT_EQ(d.size(), 28);
  EXPECT_EQ(d.bonds.size(), 36u);
  EXPECT_EQ(d.region_sites(Region::HotLead).size(), 9u);
  EXPECT_EQ(d.region_sites(Region::ColdLead).size(), 9u);
  EXPECT_EQ(d.branch_path(Branch::Top), (std::vector<int>{9, 10, 11, 12, 13}));
  EXPECT_EQ(d.branch_path(Branch::Bottom), (std::vector<int>{14, 15, 16, 17, 18}));
  EXPECT_EQ(d.site(NamedSite::Alpha), 9);
  EXPECT_EQ(d.site(NamedSite::Beta), 13);
  EXPECT_EQ(d.site(NamedSite::Gamma), 14);
  EXPECT_EQ(d.site(NamedSite::Delta), 18);
  EXPECT_TRUE(is_connected(d));
  for (const auto& b : d.bonds) EXPECT_DOUBLE_EQ(b.hopping, ev_to_hartree(0.5));
}

TEST(Lattice, DegreesMatchGeometry) {
  const auto d = build_flat_device(PhysParams::defaults());
  std::vector<int> degree(d.size(), 0);
  for (const auto& b : d.bonds) {
    ++degree[b.i];
    ++degree[b.j];
    const double dx = d.sites[b.i].position.x - d.sites[b.j].position.x;
    const double dy = d.sites[b.i].position.y - d.sites[b.j].position.y;
    EXPECT_NEAR(std::hypot(dx, dy), d.lattice_spacing, 1e-12);
  }
  for (int s : d.branch_path(Branch::Top)) EXPECT_EQ(degree[s], 2);
  EXPECT_EQ(degree[4], 4);  // lead centre
}

TEST(Lattice, RatchetLadders) {
  const auto p = PhysParams::defaults();
  const auto d = build_ratchet_device(p);
  const auto flat = build_flat_device(p);
  EXPECT_EQ(d.bonds, flat.bonds);
  const auto top = d.branch_path(Branch::Top);
  const auto bottom = d.branch_path(Branch::Bottom);
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(d.sites[top[k]].onsite, p.eps0 + ev_to_hartree(0.1 * (k + 1)), 1e-15);
    EXPECT_NEAR(d.sites[bottom[k]].onsite, p.eps0 + ev_to_hartree(0.1 * (5 - k)), 1e-15);
  }
  for (int s : d.region_sites(Region::HotLead)) EXPECT_EQ(d.sites[s].onsite, p.eps0);
}

TEST(Lattice, MirrorsAreInvolutions) {
  const auto d = build_flat_device(PhysParams::defaults());
  for (const auto& perm : {vertical_mirror(d), horizontal_mirror(d)}) {
    for (int i = 0; i < d.size(); ++i) EXPECT_EQ(perm[perm[i]], i);
    std::set<int> image(perm.begin(), perm.end());
    EXPECT_EQ(image.size(), perm.size());
  }
  const auto vm = vertical_mirror(d);
  const auto hm = horizontal_mirror(d);
  EXPECT_EQ(vm[d.site(NamedSite::Alpha)], d.site(NamedSite::Gamma));
  EXPECT_EQ(hm[d.site(NamedSite::Alpha)], d.site(NamedSite::Beta));
  EXPECT_EQ(hm[d.site(NamedSite::Gamma)], d.site(NamedSite::Delta));
}

TEST(Lattice, MirrorsPreserveBonds) {
  const auto d = build_flat_device(PhysParams::defaults());
  std::set<std::pair<int, int>> bonds;
  for (const auto& b : d.bonds) bonds.insert({b.i, b.j});
  for (const auto& perm : {vertical_mirror(d), horizontal_mirror(d)}) {
    for (const auto& b : d.bonds) {
      const int i = std::min(perm[b.i], perm[b.j]);
      const int j = std::max(perm[b.i], perm[b.j]);
      EXPECT_TRUE(bonds.count({i, j}));
    }
  }
}

TEST(Lattice, DeviceValidation) {
  const auto good = build_flat_device(PhysParams::defaults());
  EXPECT_EQ(message_of(good), "");

  auto d = good;
  d.bonds.push_back(d.bonds.front());
  EXPECT_NE(message_of(d).find("duplicate bond"), std::string::npos);

  d = good;
  d.bonds.push_back({3, 3, 1.0});
  EXPECT_NE(message_of(d).find("self-bond"), std::string::npos);

  d = good;
  d.bonds.erase(std::remove_if(d.bonds.begin(), d.bonds.end(), [](const Bond& b) { return b.i == 12 || b.j == 12; }),
                d.bonds.end());
  EXPECT_FALSE(is_connected(d));
  EXPECT_FALSE(message_of(d).empty());

  d = good;
  std::swap(d.named[0], d.named[1]);
  EXPECT_EQ(message_of(d), "named sites do not match branch ends");
}

TEST(Lattice, ParameterValidation) {
  auto p = PhysParams::defaults();
  EXPECT_EQ(message_of(p), "");
  p.kdT = p.kT_E;
  EXPECT_EQ(message_of(p), "temperature of cold bath must be positive");
  p = PhysParams::defaults();
  p.kdT = -1e-4;
  EXPECT_EQ(message_of(p), "kdT must be non-negative");
  p = PhysParams::defaults();
  p.gamma_D = -1.0;
  EXPECT_EQ(message_of(p), "observer gamma must be non-negative");
  p = PhysParams::defaults();
  p.lattice_spacing = 0.0;
  EXPECT_EQ(message_of(p), "lattice_spacing must be positive");
}

TEST(Lattice, Temperatures) {
  auto p = PhysParams::defaults();
  p.kdT = 1e-3;
  EXPECT_DOUBLE_EQ(p.kT_hot(), 0.009);
  EXPECT_DOUBLE_EQ(p.kT_cold(), 0.007);
  EXPECT_NEAR(p.eps0, 0.0367493, 1e-7);
  EXPECT_NEAR(p.lambda, 0.2 * std::sqrt(p.eps0), 1e-15);
}

TEST(Lattice, Names) {
  for (auto s : {NamedSite::Alpha, NamedSite::Beta, NamedSite::Gamma, NamedSite::Delta}) {
    EXPECT_EQ(parse_named_site(to_string(s)), s);
  }
  EXPECT_EQ(parse_named_site("β"), NamedSite::Beta);
  EXPECT_FALSE(parse_named_site("epsilon"));
}

}  // namespace
}  // namespace qobs
