#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "resobeam/errors.hpp"
#include "resobeam/gain_dynamics.hpp"

using namespace resobeam;

namespace {

GainMediumParams operating_point() {
  GainMediumParams p;
  p.a_g = 1e-3;
  p.n_slices = 1;
  return p;
}

// N2 after one full step with the density held; affine in N2.
double advance(double N2, double phi, double R_p, const GainMediumParams& p) {
  return slice_step(N2, phi, 0.0, R_p, p).N2_next;
}

}  // namespace

TEST(GainDynamics, PumpRateFromPhotonBudget) {
  const GainMediumParams p;
  const double hv = 6.626e-34 * 3e8 / 1064e-9;
  const double volume = M_PI * 2e-3 * 2e-3 * 1e-3;
  EXPECT_NEAR(pump_rate(60, p) / (0.439 * 60 / (hv * volume)), 1.0, 1e-12);
  EXPECT_EQ(pump_rate(0, p), 0.0);
  EXPECT_THROW(pump_rate(-1, p), std::invalid_argument);
}

TEST(GainDynamics, DensityPowerConversion) {
  const auto p = operating_point();
  EXPECT_NEAR(density_to_power(5.6793393e16, p), 10.0, 1e-6);
  EXPECT_NEAR(power_to_density(density_to_power(1.234e15, p), p), 1.234e15, 1e3);
}

TEST(GainDynamics, WorkedOperatingPoint) {
  const auto p = operating_point();
  const double phi = 5.679339e16;
  const double R_p = pump_rate(20, p);
  // The discrete update is affine in N2, so two evaluations give its fixed point.
  const double b = advance(0.0, phi, R_p, p);
  const double a = advance(1e24, phi, R_p, p) - b;
  const double fixed = b / (1.0 - a / 1e24);
  EXPECT_NEAR(fixed / 1.181963e24, 1.0, 1e-3);
  EXPECT_NEAR(advance(fixed, phi, R_p, p), fixed, 1e-9 * fixed);

  const double dt = p.time_step();
  const double slope = (advance(fixed, phi * 1.001, R_p, p) - advance(fixed, phi, R_p, p)) / (1e-3 * phi * dt);
  EXPECT_NEAR(slope / -5.531587e10, 1.0, 1e-3);

  double N2 = fixed;
  const auto steps = static_cast<int>(std::lround(20e-9 / dt));
  for (int i = 0; i < steps; ++i) N2 = advance(N2, 0.9 * phi, R_p, p);
  EXPECT_NEAR((N2 - fixed) / 6.283152e18, 1.0, 5e-3);
}

TEST(GainDynamics, TransparentSliceIsIdentity) {
  GainMediumParams p;
  const auto s = slice_step(0.0, 3e15, 7e14, 0.0, p);
  EXPECT_EQ(s.phi2_out, 3e15);
  EXPECT_EQ(s.phi4_out, 7e14);
  EXPECT_EQ(s.N2_next, 0.0);
}

TEST(GainDynamics, OverstepIsReported) {
  GainMediumParams p;
  // Depletion sigma * phi * l_s > 1 empties the slice in one step.
  EXPECT_THROW(slice_step(1e24, 1e28, 0.0, 0.0, p), RateEquationOverstep);
  try {
    slice_step(1e24, 1e28, 0.0, 0.0, p);
  } catch (const RateEquationOverstep& e) {
    EXPECT_NE(std::string(e.what()).find("N2"), std::string::npos);
  }
}

TEST(GainDynamics, SingleSliceCascadeMatchesSliceStep) {
  GainMediumParams p;
  p.n_slices = 1;
  GainCascade cascade(p);
  cascade.set_pump(60);
  double N2 = 0.0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> light(0.0, 1e16);
  for (int i = 0; i < 1000; ++i) {
    const double r = light(rng);
    const double l = light(rng);
    const auto ref = slice_step(N2, r, l, pump_rate(60, p), p);
    const auto out = cascade.step(r, l);
    EXPECT_NEAR(out.right, ref.phi2_out, 1e-12 * ref.phi2_out);
    EXPECT_NEAR(out.left, ref.phi4_out, 1e-12 * ref.phi4_out + 1e-300);
    N2 = ref.N2_next;
    EXPECT_NEAR(cascade.populations()[0], N2, 1e-12 * N2);
  }
}

TEST(GainDynamics, MirrorSymmetricDriveKeepsMirrorSymmetry) {
  GainCascade cascade(GainMediumParams{});
  cascade.set_pump(60);
  std::vector<double> start(10, 1.0e24);
  cascade.set_populations(start);
  for (int i = 0; i < 5000; ++i) cascade.step(2e16, 2e16);
  const auto n2 = cascade.populations();
  for (std::size_t i = 0; i < n2.size(); ++i) EXPECT_DOUBLE_EQ(n2[i], n2[n2.size() - 1 - i]);
  // Slices near the faces see more light and are depleted harder.
  EXPECT_LT(n2.front(), n2[n2.size() / 2]);
}

TEST(GainDynamics, DarkMediumRelaxesToPumpLimit) {
  GainMediumParams p;
  p.n_slices = 2;
  p.beta = 1e-12;
  GainCascade cascade(p);
  cascade.set_pump(20);
  const double limit = pump_rate(20, p) * p.tau_f;
  std::vector<double> start(2, limit * 0.5);
  cascade.set_populations(start);
  // 1.5 ms, about 15 lifetimes, in blocks with zero input light.
  for (long i = 0; i < 450'000'000 / 1000; ++i) cascade.step(0.0, 0.0);
  const double expected = limit + (limit * 0.5 - limit) * std::exp(-450'000 * p.time_step() / p.tau_f);
  EXPECT_NEAR(cascade.mean_population() / expected, 1.0, 1e-4);
}

TEST(GainDynamics, ParamsValidation) {
  GainMediumParams p;
  EXPECT_TRUE(p.validate().empty());
  p.n_slices = 0;
  p.beta = 2;
  EXPECT_EQ(p.validate().size(), 2u);
  EXPECT_THROW(GainCascade{p}, std::invalid_argument);
}
