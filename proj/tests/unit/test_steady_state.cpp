#include <gtest/gtest.h>

#include "resobeam/errors.hpp"
#include "resobeam/steady_state.hpp"

using namespace resobeam;

namespace {

constexpr double kA = 2e-3;
constexpr double kIs = 1.1976e7;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(SteadyState, ReferenceThresholdAndSlope) {
  const LossBudget loss;
  const PumpChain pump;
  EXPECT_LT(rel(threshold_power(loss, pump, kA, kIs), 30.9862), 1e-5);
  EXPECT_LT(rel(slope_efficiency(loss, pump), 2.58436), 1e-5);
}

TEST(SteadyState, EquivalentReflectivities) {
  const LossBudget loss;
  EXPECT_NEAR(loss.left_reflectivity(), 0.985 * 0.99 * 0.99 * 0.99 * 0.99, 1e-12);
  EXPECT_NEAR(loss.right_reflectivity(), 0.99 * 0.99 * 0.9, 1e-12);
  EXPECT_NEAR(loss.static_loss(), loss.left_reflectivity() * loss.right_reflectivity(), 1e-12);
}

TEST(SteadyState, PumpSweepOracle) {
  const LossBudget loss;
  const PumpChain pump;
  const std::pair<double, double> expected[] = {{40, 2.30619}, {50, 4.86470}, {60, 7.42322}, {70, 9.98173}, {80, 12.54024}};
  for (auto [p, w] : expected) {
    const auto out = output_power(p, loss, pump, kA, kIs);
    EXPECT_FALSE(out.below_threshold);
    EXPECT_LT(rel(out.watts, w), 2e-6) << p << " W";
  }
  const auto dark = output_power(30, loss, pump, kA, kIs);
  EXPECT_TRUE(dark.below_threshold);
  EXPECT_EQ(dark.watts, 0.0);
}

TEST(SteadyState, MirrorSweepOracle) {
  const PumpChain pump;
  const std::pair<double, double> expected[] = {{0.85, 5.76218}, {0.95, 6.80261}, {0.995, 1.26429}};
  for (auto [r, w] : expected) {
    LossBudget loss;
    loss.R_M2 = r;
    EXPECT_LT(rel(output_power(60, loss, pump, kA, kIs).watts, w), 2e-6) << r;
  }
}

TEST(SteadyState, OutputIsLinearAboveThreshold) {
  const LossBudget loss;
  const PumpChain pump;
  const double a = output_power(50, loss, pump, kA, kIs).watts;
  const double b = output_power(60, loss, pump, kA, kIs).watts;
  const double c = output_power(70, loss, pump, kA, kIs).watts;
  EXPECT_NEAR(b - a, c - b, 1e-9);
}

TEST(SteadyState, NegativePumpThrows) {
  EXPECT_THROW(output_power(-1, LossBudget{}, PumpChain{}, kA, kIs), std::invalid_argument);
}

TEST(SteadyState, PumpChainConsistency) {
  PumpChain p;
  p.factors = PumpChain::Factors{0.5, 1, 1, 1, 1, 0.878};
  EXPECT_NEAR(p.combined(), 0.439, 1e-12);
  p.factors->eta_p = 0.6;
  EXPECT_THROW(p.combined(), ConfigError);
  p.eta_c.reset();
  EXPECT_NEAR(p.combined(), 0.6 * 0.878, 1e-12);
}

TEST(SteadyState, LossValidationNamesField) {
  LossBudget loss;
  loss.R_M2 = 1.2;
  const auto issues = loss.validate();
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("loss.R_M2"), std::string::npos);
}
