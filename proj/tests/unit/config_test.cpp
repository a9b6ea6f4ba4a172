#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qobs/config.hpp"
#include "qobs/units.hpp"

namespace qobs {
namespace {

ConfigError error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError("", 0, "");
}

TEST(Config, Defaults) {
  const auto cfg = parse_config("device = \"flat\"\n");
  EXPECT_EQ(cfg.source, ConfigSource{});
  EXPECT_EQ(cfg.device.size(), 28);
  EXPECT_NEAR(cfg.params.eps0, ev_to_hartree(1.0), 1e-15);
  EXPECT_NEAR(cfg.params.hopping, ev_to_hartree(0.5), 1e-15);
  EXPECT_NEAR(cfg.params.lambda, 0.2 * std::sqrt(cfg.params.eps0), 1e-15);
  EXPECT_EQ(cfg.params.kT_E, 0.008);
  EXPECT_FALSE(cfg.params.observer_site);
  EXPECT_FALSE(cfg.source.sweep.gamma_max);
  EXPECT_EQ(cfg.source.sweep.gamma_steps, 21);
}

TEST(Config, FullDocument) {
  const auto cfg = parse_config(R"(
# comment
device = "ratchet"
kdT_au = 1e-3     # trailing comment
mode = 'literal'
[observer]
site = "δ"
gamma = 0.01
[sweep]
gamma_max = 0.02
gamma_steps = 3
kdT_max = 1e-3
kdT_steps = 2
[cut]
top_bond = 1
bottom_bond = 4
[defect]
site = 20
shift_eV = -0.1
)");
  EXPECT_EQ(cfg.source.device, DeviceKind::Ratchet);
  EXPECT_EQ(cfg.params.mode, DissipatorMode::Literal);
  EXPECT_EQ(cfg.params.observer_site, 18);
  EXPECT_EQ(cfg.params.gamma_D, 0.01);
  EXPECT_EQ(cfg.params.kdT, 1e-3);
  EXPECT_EQ(cfg.source.sweep.gamma_max, 0.02);
  EXPECT_EQ(cfg.source.cut, (CutSelection{1, 4}));
  EXPECT_NEAR(cfg.device.sites[20].onsite, cfg.params.eps0 - ev_to_hartree(0.1), 1e-15);
}

TEST(Config, DottedKeysMatchTables) {
  const auto a = parse_config("device = \"flat\"\nobserver.site = \"alpha\"\nobserver.gamma = 0.003\n");
  const auto b = parse_config("device = \"flat\"\n[observer]\nsite = \"alpha\"\ngamma = 0.003\n");
  EXPECT_EQ(a.source, b.source);
}

TEST(Config, EmitRoundTrips) {
  ConfigSource s;
  s.device = DeviceKind::Ratchet;
  s.kdT_au = 1.2345678901234567e-3;
  s.omega_c_au = 0.3;
  s.observer_site = "beta";
  s.observer_gamma = 1.0 / 3.0;
  s.sweep.gamma_max = 0.1 / 7.0;
  s.sweep.kdT_steps = 5;
  s.mode = DissipatorMode::Literal;
  s.cut = {0, 5};
  s.defect = SiteShift{3, 0.05};
  const auto back = parse_config(emit_config(s));
  EXPECT_EQ(back.source, s);
  EXPECT_EQ(emit_config(back.source), emit_config(s));
}

TEST(Config, ErrorsCarryKeyAndLine) {
  auto e = error_of("device = \"flat\"\nfoo = 1\n");
  EXPECT_EQ(e.key(), "foo");
  EXPECT_EQ(e.line(), 2);
  EXPECT_STREQ(e.what(), "line 2: foo: unknown key");

  e = error_of("device = \"flat\"\n[sweep]\ngamma_steps = 2.5\n");
  EXPECT_EQ(e.key(), "sweep.gamma_steps");
  EXPECT_EQ(e.line(), 3);

  e = error_of("device = \"flat\"\nkdT_au = 1e-3\nkdT_au = 2e-3\n");
  EXPECT_EQ(e.line(), 3);
  EXPECT_NE(std::string(e.what()).find("duplicate key"), std::string::npos);

  e = error_of("device = \"flat\"\nkT_E_au = \"hot\"\n");
  EXPECT_EQ(e.key(), "kT_E_au");
  EXPECT_EQ(e.line(), 2);

  e = error_of("device = \"flat\"\n[observer\n");
  EXPECT_EQ(e.line(), 2);

  e = error_of("device = \"flat\"\nname = \"unterminated\n");
  EXPECT_EQ(e.line(), 2);

  e = error_of("kdT_au = 1e-3\n");
  EXPECT_EQ(e.key(), "device");
}

TEST(Config, ValueErrors) {
  EXPECT_EQ(error_of("device = \"flat\"\nkdT_au = 0.008\n").key(), "kdT_au");
  EXPECT_EQ(error_of("device = \"flat\"\nkdT_au = -1e-3\n").key(), "kdT_au");
  EXPECT_EQ(error_of("device = \"round\"\n").key(), "device");
  EXPECT_EQ(error_of("device = \"flat\"\nmode = \"secular\"\n").key(), "mode");
  EXPECT_EQ(error_of("device = \"flat\"\nobserver.site = \"epsilon\"\n").key(), "observer.site");
  EXPECT_EQ(error_of("device = \"flat\"\nobserver.site = 28\n").key(), "observer.site");
  EXPECT_EQ(error_of("device = \"flat\"\nobserver.gamma = -1\n").key(), "observer.gamma");
  EXPECT_EQ(error_of("device = \"flat\"\ncut.top_bond = 6\n").key(), "cut.top_bond");
  EXPECT_EQ(error_of("device = \"flat\"\ndefect.site = 40\ndefect.shift_eV = 0.1\n").key(), "defect.site");
  EXPECT_EQ(error_of("device = \"flat\"\nsweep.gamma_steps = 0\n").key(), "sweep.gamma_steps");
}

TEST(Config, ResolveSite) {
  const auto cfg = parse_config("device = \"flat\"\n");
  EXPECT_EQ(resolve_site(cfg.device, "alpha"), 9);
  EXPECT_EQ(resolve_site(cfg.device, "β"), 13);
  EXPECT_EQ(resolve_site(cfg.device, "gamma"), 14);
  EXPECT_EQ(resolve_site(cfg.device, "18"), 18);
  EXPECT_EQ(resolve_site(cfg.device, "0"), 0);
  EXPECT_THROW(resolve_site(cfg.device, "-1"), std::invalid_argument);
  EXPECT_THROW(resolve_site(cfg.device, "omega"), std::invalid_argument);
}

TEST(Config, Grid) {
  SweepSettings s;
  s.gamma_steps = 5;
  s.kdT_steps = 3;
  s.kdT_max = 2e-3;
  const auto g = make_grid(s, 0.04, "beta");
  EXPECT_EQ(g.gamma_values, (std::vector<double>{0.0, 0.01, 0.02, 0.03, 0.04}));
  EXPECT_EQ(g.kdT_values, (std::vector<double>{0.0, 1e-3, 2e-3}));
  EXPECT_EQ(g.size(), 15u);
  s.gamma_steps = 1;
  EXPECT_EQ(make_grid(s, 0.04, "").gamma_values, std::vector<double>{0.0});
  EXPECT_EQ(linspace(0.0, 1.0, 3), (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(Config, LoadFile) {
  const auto path = std::filesystem::temp_directory_path() / "qobs_config_test.toml";
  {
    std::ofstream out(path);
    out << "device = \"ratchet\"\nkdT_au = 5e-4\n";
  }
  const auto cfg = load_config(path);
  EXPECT_EQ(cfg.source.device, DeviceKind::Ratchet);
  EXPECT_EQ(cfg.params.kdT, 5e-4);
  std::filesystem::remove(path);
  EXPECT_ANY_THROW(load_config(path));
}

}  // namespace
}  // namespace qobs
