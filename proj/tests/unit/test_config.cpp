#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "resobeam/config.hpp"
#include "resobeam/errors.hpp"

using namespace resobeam;

namespace {

std::vector<std::string> issues_of(std::string_view text) {
  try {
    parse_config(text, "t.cfg");
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, std::string_view needle) {
  return std::any_of(issues.begin(), issues.end(), [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(Config, EmptyTextGivesReferenceSystem) {
  const auto cfg = parse_config("");
  EXPECT_EQ(cfg.P_in, 60.0);
  EXPECT_EQ(cfg.loss.R_M2, 0.9);
  const auto cav = cfg.cavity();
  EXPECT_EQ(cav.n_L, 30);
  EXPECT_EQ(cav.n_R, 3090);
  EXPECT_NEAR(cfg.resolved_medium().eta_c, 0.439, 1e-12);
}

TEST(Config, SectionsCommentsAndLists) {
  const auto cfg = parse_config(
      "# comment\n"
      "[pump]\n"
      "P_in = 70   # trailing\n"
      "schedule = 0 1e-4 40; 1e-4 2e-4 80\n"
      "[sweep]\n"
      "ber_rates = 1e9, 2e9\n"
      "loss.R_M2 = 0.95\n");
  EXPECT_EQ(cfg.P_in, 70.0);
  ASSERT_EQ(cfg.pump_schedule.size(), 2u);
  EXPECT_EQ(cfg.pump_schedule[1].power, 80.0);
  EXPECT_EQ(cfg.sweep.ber_rates, (std::vector<double>{1e9, 2e9}));
  EXPECT_EQ(cfg.loss.R_M2, 0.95);
}

TEST(Config, OutOfRangeValueNamesItsField) {
  const auto issues = issues_of("[loss]\nR_M2 = 1.2\n");
  ASSERT_FALSE(issues.empty());
  EXPECT_TRUE(mentions(issues, "loss.R_M2"));
}

TEST(Config, EveryProblemIsReportedAtOnce) {
  const auto issues = issues_of("[loss]\nR_M2 = 1.2\n[medium]\ntau_f = -1\nbogus = 3\n");
  EXPECT_TRUE(mentions(issues, "loss.R_M2"));
  EXPECT_TRUE(mentions(issues, "medium.tau_f"));
  EXPECT_TRUE(mentions(issues, "medium.bogus"));
}

TEST(Config, UnstableLayoutReportsStability) {
  const auto issues = issues_of("[geometry]\nd = 4\n");
  EXPECT_TRUE(mentions(issues, "unstable"));
  RunConfig cfg;
  cfg.geometry.d = 4.0;
  EXPECT_THROW(cfg.cavity(), UnstableCavityError);
}

TEST(Config, ParseErrorCarriesLineAndColumn) {
  try {
    parse_config("[pump]\nP_in = 60\n[broken\n", "x.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("x.cfg:3:"), std::string::npos) << e.what();
  }
  try {
    parse_config("[pump]\nP_in = sixty\n", "y.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("y.cfg:2:"), std::string::npos) << e.what();
  }
}

TEST(Config, OverridesApplyAndRevalidate) {
  RunConfig cfg;
  apply_overrides(cfg, {"pump.P_in=75", "demod.adc_bits=8", "cavity.n_L=5"});
  EXPECT_EQ(cfg.P_in, 75.0);
  EXPECT_EQ(cfg.demod.adc_bits, 8);
  EXPECT_EQ(cfg.cavity().n_L, 5);
  EXPECT_THROW(apply_overrides(cfg, {"loss.R_M2=2"}), ConfigError);
  EXPECT_THROW(apply_overrides(cfg, {"no_equals_sign"}), ConfigError);
}

TEST(Config, ManifestRoundTrips) {
  RunConfig cfg;
  apply_overrides(cfg, {"pump.P_in=72.5", "scenario.intrusions=1e-4 2e-5 3e-4", "modulation.windows=1e-4 2e-4",
                        "record.windows=0 1e-5 3", "sweep.ber_noise=0, 1e-3", "run.seed=99", "loss.R_M2=0.995",
                        "demod.distance_hint=2.1", "modulation.bits=1011",
                        "demod.upsampling=hold"});
  const auto text = to_config_text(cfg);
  const auto back = parse_config(text, "manifest");
  EXPECT_EQ(to_config_text(back), text);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.demod.upsampling, Upsampling::Hold);
  EXPECT_EQ(back.intrusions.size(), 1u);
  EXPECT_EQ(back.bitstream(), (Bitstream{1, 0, 1, 1}));
  // Every registered key appears in the manifest.
  for (const auto& key : config_keys()) {
    const auto dot = key.find('.');
    EXPECT_NE(text.find(key.substr(dot + 1)), std::string::npos) << key;
  }
}

TEST(Config, BitstreamSources) {
  RunConfig cfg;
  cfg.bits = "random:50";
  EXPECT_EQ(cfg.bitstream().size(), 50u);
  const auto path = std::filesystem::temp_directory_path() / "resobeam_bits.txt";
  std::ofstream(path) << "1100\n01\n";
  cfg.bits = "file:" + path.string();
  EXPECT_EQ(cfg.bitstream(), (Bitstream{1, 1, 0, 0, 0, 1}));
  std::filesystem::remove(path);
}

TEST(Config, DefaultScenarioPumpsForTheWholeRun) {
  RunConfig cfg;
  cfg.duration = 2e-4;
  const auto sc = cfg.scenario();
  ASSERT_EQ(sc.pump.size(), 1u);
  EXPECT_EQ(sc.pump[0].power, 60.0);
  EXPECT_EQ(sc.pump[0].t_end, 2e-4);
}

TEST(Config, ManifestReplaysTheSameRun) {
  RunConfig cfg;
  apply_overrides(cfg, {"scenario.duration=4e-6", "modulation.windows=1e-6 3e-6", "modulation.bits=random:32",
                        "record.decimation=7", "cavity.n_L=3", "cavity.n_R=17", "pump.P_in=80"});
  const auto text = to_config_text(cfg);
  const auto once = [&] {
    const auto c = parse_config(text, "manifest");
    return run(c.scenario(), c.cavity()).main.at(Channel::OutputPower).samples;
  };
  const auto a = once();
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, once());
}
