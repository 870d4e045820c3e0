#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "resobeam/errors.hpp"
#include "resobeam/fir.hpp"
#include "resobeam/fourier.hpp"
#include "resobeam/relaxation.hpp"

using namespace resobeam;

namespace {

Waveform tone(double f, double amp, double dt, std::size_t n, double offset = 0.0) {
  Waveform w;
  w.dt = dt;
  w.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) w.samples[k] = offset + amp * std::sin(2 * M_PI * f * static_cast<double>(k) * dt);
  return w;
}

// Direct O(n^2) transform.
std::complex<double> naive_bin(const std::vector<double>& x, std::size_t k) {
  std::complex<double> acc;
  const double n = static_cast<double>(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) acc += x[j] * std::polar(1.0, -2 * M_PI * double(k) * double(j) / n);
  return acc;
}

}  // namespace

TEST(Fourier, MatchesDirectTransform) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<double> x(97);
  for (auto& v : x) v = g(rng);
  const auto bins = real_dft(x);
  ASSERT_EQ(bins.size(), 49u);
  for (std::size_t k = 0; k < bins.size(); ++k) EXPECT_LT(std::abs(bins[k] - naive_bin(x, k)), 1e-9);
}

TEST(Fourier, ToneAmplitudeAndBin) {
  const double dt = 1e-6;
  const auto w = tone(50e3, 2.0, dt, 1000, 0.5);
  for (auto win : {Window::Rectangular, Window::Hann, Window::Blackman}) {
    const auto s = spectrum(w, win);
    const auto peak = std::max_element(s.magnitude.begin() + 1, s.magnitude.end()) - s.magnitude.begin();
    EXPECT_NEAR(s.frequency_hz[peak], 50e3, 1.0);
    EXPECT_NEAR(s.magnitude[peak], 2.0, 0.02);
    EXPECT_NEAR(s.magnitude[0], 0.5, 0.01);
  }
  EXPECT_THROW(spectrum(Waveform{}, Window::Hann), std::invalid_argument);
}

TEST(Fourier, BandFractionRectangularIsParseval) {
  const double dt = 1e-6;
  auto w = tone(20e3, 1.0, dt, 1000);
  const auto hi = tone(300e3, 0.5, dt, 1000);
  for (std::size_t k = 0; k < w.size(); ++k) w.samples[k] += hi.samples[k];
  // Power ratio 1 : 0.25, both exactly on bins.
  EXPECT_NEAR(low_band_energy_fraction(w, 250e3, Window::Rectangular), 0.8, 1e-9);
  EXPECT_NEAR(low_band_energy_fraction(w, 250e3, Window::Hann), 0.8, 1e-3);
}

TEST(Fourier, HannWindowSymmetric) {
  const auto w = window_weights(9, Window::Hann);
  EXPECT_DOUBLE_EQ(w[0], 0.0);
  EXPECT_DOUBLE_EQ(w[4], 1.0);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(w[i], w[8 - i], 1e-15);
}

TEST(Fir, DesignMeetsSpecification) {
  const double fs = 300e9;
  const FilterSpec spec{1e9, 1.2e9, 40.0};
  const auto f = FirFilter::design_lowpass(spec, fs);
  const auto taps = f.taps();
  ASSERT_EQ(taps.size() % 2, 1u);
  for (std::size_t i = 0; i < taps.size(); ++i) EXPECT_DOUBLE_EQ(taps[i], taps[taps.size() - 1 - i]);
  EXPECT_NEAR(std::accumulate(taps.begin(), taps.end(), 0.0), 1.0, 1e-12);
  for (double fr = spec.stopband_hz; fr < fs / 2; fr += 0.37e9) EXPECT_LT(20 * std::log10(f.magnitude(fr, fs)), -40.0 + 1e-6);
  EXPECT_NEAR(f.magnitude(0.5e9, fs), 1.0, 0.02);
}

TEST(Fir, RejectsImpossibleEdges) {
  EXPECT_THROW(FirFilter::design_lowpass({2e9, 1e9, 40}, 300e9), DemodError);
  EXPECT_THROW(FirFilter::design_lowpass({1e9, 200e9, 40}, 300e9), DemodError);
}

TEST(Fir, LinearAndConstantPreserving) {
  const FirFilter f({0.25, 0.5, 0.25});
  std::vector<double> a{1, 2, 3, 4, 5}, b{-1, 0, 2, 0, 1}, sum(5);
  for (int i = 0; i < 5; ++i) sum[i] = 2 * a[i] - 3 * b[i];
  const auto fa = f.apply(a), fb = f.apply(b), fs = f.apply(sum);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(fs[i], 2 * fa[i] - 3 * fb[i], 1e-12);
  const auto flat = f.apply(std::vector<double>(6, 3.0));
  for (double v : flat) EXPECT_DOUBLE_EQ(v, 3.0);
  EXPECT_EQ(f.group_delay(), 1u);
}

TEST(Fir, GroupDelayAlignsAStep) {
  Waveform w;
  w.dt = 1.0 / 300e9;
  w.samples.assign(4000, 0.0);
  std::fill(w.samples.begin() + 2000, w.samples.end(), 1.0);
  const auto out = lowpass(w, {1e9, 1.2e9, 40});
  EXPECT_NEAR(out.wave.samples[2000 + out.group_delay], 0.5, 0.02);
}

TEST(Relaxation, DampedOscillationMetrics) {
  Waveform w;
  w.dt = 1e-8;
  const double f = 40e3, tau = 60e-6, steady = 5.0, delay = 50e-6;
  for (int k = 0; k < 100000; ++k) {
    const double t = k * w.dt;
    w.samples.push_back(t < delay ? 0.0 : steady * (1 - std::exp(-(t - delay) / tau) * std::cos(2 * M_PI * f * (t - delay))));
  }
  const auto m = analyse_relaxation(w);
  ASSERT_TRUE(m.lasing);
  EXPECT_NEAR(m.steady, steady, 1e-3);
  EXPECT_NEAR(m.frequency_hz, f, 0.02 * f);
  EXPECT_GT(m.peak_to_steady, 1.2);
  EXPECT_NEAR(m.peak_time, delay + 1 / (2 * f), 3e-6);
  // Envelope steady * exp(-t / tau) falls below 5 % after tau * ln 20.
  EXPECT_LT(m.settle_time, delay + tau * std::log(20.0) + 1e-6);
  EXPECT_GT(m.settle_time, delay + 100e-6);
}

TEST(Relaxation, DarkTraceReportsZeros) {
  Waveform w;
  w.dt = 1e-9;
  w.samples.assign(1000, 1e-5);
  const auto m = analyse_relaxation(w);
  EXPECT_FALSE(m.lasing);
  EXPECT_EQ(m.frequency_hz, 0.0);
  EXPECT_EQ(m.peak_to_steady, 0.0);
}
