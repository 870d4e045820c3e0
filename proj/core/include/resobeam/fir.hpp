#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "resobeam/waveform.hpp"

namespace resobeam {

struct FilterSpec {
  double passband_hz = 1.0e9;
  double stopband_hz = 1.2e9;
  double attenuation_db = 40.0;
};

/// Linear-phase (odd length, symmetric) lowpass FIR.
class FirFilter {
 public:
  /// Kaiser-windowed sinc with the cutoff centred in the transition band.
  /// The length is grown until the sampled stopband response meets the
  /// attenuation; DC gain is normalised to exactly 1. Throws DemodError if
  /// the edges are not ordered below Nyquist or the length exceeds 2^22.
  static FirFilter design_lowpass(const FilterSpec& spec, double sample_rate);

  explicit FirFilter(std::vector<double> taps);

  std::span<const double> taps() const { return taps_; }
  std::size_t group_delay() const { return (taps_.size() - 1) / 2; }

  /// Causal convolution, same length as the input. The signal is extended
  /// to the left with its first sample, so a constant passes unchanged.
  std::vector<double> apply(std::span<const double> x) const;

  /// |H(f)| at f (Hz) for sampling rate fs.
  double magnitude(double f, double fs) const;

 private:
  std::vector<double> taps_;
};

struct Filtered {
  Waveform wave;
  std::size_t group_delay = 0;  ///< samples
};

Filtered lowpass(const Waveform& signal, const FilterSpec& spec);

}  // namespace resobeam
