#pragma once

#include <complex>
#include <mutex>
#include <span>
#include <vector>

#include "resobeam/waveform.hpp"

namespace resobeam {

enum class Window { Rectangular, Hann, Blackman };

/// Single-sided amplitude spectrum: a sinusoid of amplitude A shows up with
/// magnitude ~A in its bin (coherent-gain corrected), DC with its mean.
struct Spectrum {
  std::vector<double> frequency_hz;
  std::vector<double> magnitude;
};

/// Symmetric window of length n.
std::vector<double> window_weights(std::size_t n, Window window);

/// Throws std::invalid_argument on empty input.
Spectrum spectrum(const Waveform& wave, Window window);

/// Share of the non-DC energy of the windowed, mean-removed signal lying
/// strictly below `cutoff_hz`. With Window::Rectangular this is exact by
/// Parseval; a taper keeps the edges of a non-periodic record from leaking.
double low_band_energy_fraction(const Waveform& wave, double cutoff_hz, Window window = Window::Hann);

/// Forward real-to-complex DFT of length x.size(); returns n/2 + 1 bins.
std::vector<std::complex<double>> real_dft(std::span<const double> x);

namespace detail {
/// FFTW's planner is not re-entrant.
std::mutex& fftw_planner_mutex();
}  // namespace detail

}  // namespace resobeam
