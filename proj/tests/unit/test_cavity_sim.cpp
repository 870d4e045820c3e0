#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <random>

#include "resobeam/cavity_sim.hpp"
#include "resobeam/errors.hpp"

using namespace resobeam;

namespace {

/// Same medium and losses, much shorter arms: cheap to run for many round trips.
CavityConfig short_cavity() {
  CavityConfig cfg;
  cfg.n_L = 3;
  cfg.n_R = 17;
  return cfg;
}

/// Light in the loop but a transparent, unpumped medium.
CavitySimulator primed_transparent(const CavityConfig& cfg) {
  CavitySimulator sim(cfg);
  std::vector<double> n2(static_cast<std::size_t>(cfg.medium.n_slices), 1.0e24);
  sim.cascade().set_populations(n2);
  for (long i = 0; i < 3 * cfg.round_trip_steps(); ++i) sim.step(1.0, 1.0);
  std::fill(n2.begin(), n2.end(), 0.0);
  sim.cascade().set_populations(n2);
  return sim;
}

}  // namespace

TEST(DelayLine, ReturnsInputExactlyLengthStepsLater) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t length : {1u, 2u, 7u, 3090u}) {
    DelayLine line(length);
    std::deque<double> reference(length, 0.0);
    for (int i = 0; i < 10000; ++i) {
      const double x = u(rng);
      reference.push_back(x);
      ASSERT_EQ(line.push(x), reference.front());
      reference.pop_front();
    }
  }
  EXPECT_THROW(DelayLine{0}, std::invalid_argument);
}

TEST(CavitySim, DefaultDelaysFromGeometry) {
  const auto delays = derive_delays(CavityGeometry{}, 1e-3, 3e8);
  EXPECT_EQ(delays.n_L, 30);
  EXPECT_EQ(delays.n_R, 3090);
  const CavityConfig cfg;
  EXPECT_EQ(cfg.round_trip_steps(), 6242);
  CavityGeometry bad;
  bad.d = 4.0;
  EXPECT_THROW(derive_delays(bad, 1e-3, 3e8), UnstableCavityError);
}

TEST(CavitySim, DarkUnpumpedCavityStaysDark) {
  CavitySimulator sim(short_cavity());
  for (int i = 0; i < 100000; ++i) {
    const auto r = sim.step(1.0, 1.0);
    ASSERT_EQ(r.p_out, 0.0);
  }
  EXPECT_EQ(sim.stored_photons(), 0.0);
}

TEST(CavitySim, PassiveCavityNeverGainsEnergy) {
  const auto cfg = short_cavity();
  auto sim = primed_transparent(cfg);
  double stored = sim.stored_photons();
  ASSERT_GT(stored, 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20 * cfg.round_trip_steps(); ++i) {
    sim.step(u(rng), u(rng));
    const double now = sim.stored_photons();
    ASSERT_LE(now, stored * (1.0 + 1e-12));
    stored = now;
  }
}

TEST(CavitySim, TransparentMediumHasUnitGain) {
  const auto cfg = short_cavity();
  auto sim = primed_transparent(cfg);
  for (int i = 0; i < 5 * cfg.round_trip_steps(); ++i) {
    const auto r = sim.step(1.0, 1.0);
    if (r.phi1 > 1e-300) {
      ASSERT_DOUBLE_EQ(r.phi2_next / r.phi1, 1.0);
    }
  }
}

TEST(CavitySim, ModulatorImpulseRecursEveryRoundTrip) {
  const auto cfg = short_cavity();
  const auto base = primed_transparent(cfg);
  auto plain = base;
  auto kicked = base;
  const long nc = cfg.round_trip_steps();
  const long kick = 5;
  std::vector<long> hits;
  for (long i = 0; i < 4 * nc; ++i) {
    const double a = plain.step(1.0, 1.0).p_out;
    const double b = kicked.step(i == kick ? 0.5 : 1.0, 1.0).p_out;
    if (a != b) hits.push_back(i);
  }
  ASSERT_GE(hits.size(), 3u);
  // First reaches M2 half a round trip later, then once per circulation.
  EXPECT_EQ(hits[0] - kick, nc / 2);
  for (std::size_t k = 1; k < hits.size(); ++k) EXPECT_EQ(hits[k] - hits[k - 1], nc);
}

TEST(CavitySim, SnapshotsReplayBitForBit) {
  const auto cfg = short_cavity();
  CavitySimulator a(cfg);
  a.set_pump(60);
  for (int i = 0; i < 20000; ++i) a.step(1.0, 1.0);
  auto b = a;
  for (int i = 0; i < 20000; ++i) {
    const double s = (i / 7) % 2 ? 1.0 : 0.98;
    ASSERT_EQ(a.step(s, 1.0).p_out, b.step(s, 1.0).p_out);
  }
}

TEST(CavitySim, BlockedArmDrainsTheOutput) {
  auto cfg = short_cavity();
  CavitySimulator sim(cfg);
  sim.set_pump(80);
  // About 150 us: the short loop lases well before that.
  for (long i = 0; i < 45'000'000; ++i) sim.step(1.0, 1.0);
  double lasing = 0.0;
  for (int i = 0; i < 1000; ++i) lasing = std::max(lasing, sim.step(1.0, 1.0).p_out);
  ASSERT_GT(lasing, 1.0);
  // Two microseconds fully blocked; only amplified fluorescence remains.
  double last = 0.0;
  for (long i = 0; i < 600'000; ++i) last = sim.step(1.0, 0.0).p_out;
  EXPECT_LT(last, 1e-3 * lasing);
}

TEST(CavitySim, RunHonoursScenarioClock) {
  const auto cfg = short_cavity();
  Scenario sc;
  sc.duration = 2e-6;
  sc.pump = {{0.0, 2e-6, 60.0}};
  sc.decimation = 100;
  CavitySimulator sim(cfg);
  const auto rec = run(sc, sim);
  EXPECT_EQ(rec.steps, 600'000);
  EXPECT_EQ(rec.main.at(Channel::OutputPower).size(), 6000u);
  sc.duration = 4e-6;
  const auto more = run(sc, sim);
  EXPECT_EQ(more.steps, 600'000);
  EXPECT_NEAR(sim.time(), 4e-6, 1e-15);
}

TEST(CavitySim, IntrusionProfile) {
  Intrusion in{1e-6, 1e-6, 5e-6};
  EXPECT_EQ(in.transmissivity(0.5e-6), 1.0);
  EXPECT_NEAR(in.transmissivity(1.5e-6), 0.5, 1e-12);
  EXPECT_EQ(in.transmissivity(3e-6), 0.0);
  EXPECT_NEAR(in.transmissivity(5.25e-6), 0.25, 1e-12);
  EXPECT_EQ(in.transmissivity(7e-6), 1.0);
}

TEST(CavitySim, GainMonitorFlagsDarkSamples) {
  RecordBlock block;
  block.channels = {Channel::GainInput, Channel::GainOutput};
  block.traces = {Waveform{{0.0, 2.0, 1e-20}, 1.0, "W"}, Waveform{{0.0, 3.0, 1.0}, 1.0, "W"}};
  const auto g = gain_monitor(block);
  EXPECT_EQ(g.invalid, 2u);
  EXPECT_EQ(g.valid[1], 1);
  EXPECT_DOUBLE_EQ(g.gain.samples[1], 1.5);
}
