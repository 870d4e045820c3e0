#include "resobeam/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace resobeam {

namespace detail {
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

std::vector<std::complex<double>> real_dft(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  if (n == 0) throw std::invalid_argument("real_dft: empty input");
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> window_weights(std::size_t n, Window window) {
  std::vector<double> w(n, 1.0);
  if (n > 1) {
    for (std::size_t k = 0; k < n; ++k) {
      const double x = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n - 1);
      switch (window) {
        case Window::Rectangular:
          break;
        case Window::Hann:
          w[k] = 0.5 - 0.5 * std::cos(x);
          break;
        case Window::Blackman:
          w[k] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
          break;
      }
    }
  }
  return w;
}

Spectrum spectrum(const Waveform& wave, Window window) {
  if (wave.empty()) throw std::invalid_argument("spectrum: empty waveform");
  const std::size_t n = wave.size();
  const auto w = window_weights(n, window);
  const double gain = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> xw(n);
  for (std::size_t k = 0; k < n; ++k) xw[k] = wave.samples[k] * w[k];
  const auto bins = real_dft(xw);

  Spectrum s;
  s.frequency_hz.resize(bins.size());
  s.magnitude.resize(bins.size());
  const double df = 1.0 / (static_cast<double>(n) * wave.dt);
  for (std::size_t k = 0; k < bins.size(); ++k) {
    s.frequency_hz[k] = static_cast<double>(k) * df;
    const bool nyquist = (n % 2 == 0) && k == n / 2;
    const double scale = (k == 0 || nyquist) ? 1.0 : 2.0;
    s.magnitude[k] = scale * std::abs(bins[k]) / gain;
  }
  return s;
}

double low_band_energy_fraction(const Waveform& wave, double cutoff_hz, Window window) {
  if (wave.empty()) throw std::invalid_argument("low_band_energy_fraction: empty waveform");
  const double mean = std::accumulate(wave.samples.begin(), wave.samples.end(), 0.0) / wave.size();
  const auto w = window_weights(wave.size(), window);
  std::vector<double> centred(wave.size());
  for (std::size_t k = 0; k < wave.size(); ++k) centred[k] = (wave.samples[k] - mean) * w[k];
  const auto bins = real_dft(centred);
  const std::size_t n = wave.size();
  const double df = 1.0 / (static_cast<double>(n) * wave.dt);
  double low = 0.0;
  double total = 0.0;
  for (std::size_t k = 1; k < bins.size(); ++k) {
    const bool nyquist = (n % 2 == 0) && k == n / 2;
    const double e = (nyquist ? 1.0 : 2.0) * std::norm(bins[k]);
    total += e;
    if (static_cast<double>(k) * df < cutoff_hz) low += e;
  }
  return total > 0.0 ? low / total : 1.0;
}

}  // namespace resobeam
