#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "resobeam/cavity_sim.hpp"
#include "resobeam/config.hpp"
#include "resobeam/fourier.hpp"
#include "resobeam/modem.hpp"
#include "resobeam/relaxation.hpp"

namespace resobeam {

/// splitmix64 finaliser; used to derive independent per-cell seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Runs body(0..count-1) on up to hardware_concurrency threads. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Simulator after `duration` seconds of constant pump from a dark start.
CavitySimulator warm_start(const CavityConfig& cavity, double P_in, double duration);

struct SteadyPoint {
  double P_in = 0.0;
  double R_M2 = 0.0;
  double simulated = 0.0;  ///< W, mean over the tail of the run
  double theory = 0.0;     ///< W, closed form
  bool below_threshold = false;
  RelaxationMetrics relaxation;
  Waveform trace;          ///< P_out at `trace_decimation` steps
};

inline constexpr long kTraceDecimation = 300;  // 1 ns at the default step

/// Dark start-up at (P_in, R_M2) for `duration`, the rest from `base`.
SteadyPoint steady_point(const RunConfig& base, double P_in, double R_M2, double duration);

struct IntrusionResult {
  double t_start = 0.0;
  double t_reopen = 0.0;
  double steady_before = 0.0;
  double blocked_max = 0.0;  ///< W, once fully closed
  double pulse_peak = 0.0;
  double pulse_time = 0.0;
  double pulse_fwhm = 0.0;   ///< s
  std::size_t pulses = 0;    ///< maxima above half the pulse peak after reopening
  std::size_t later_peaks = 0;  ///< relaxation maxima above the final level after the pulse
  Waveform power;
  Waveform obstruction;
};

/// Blocks the beam of a warmed-up simulator with one intrusion starting at
/// its current time. `warm` is copied.
IntrusionResult intrusion_experiment(const RunConfig& base, const CavitySimulator& warm);

struct GainSpectrumResult {
  double low_band_fraction = 0.0;  ///< Hann, non-DC energy below the cutoff
  double cutoff_hz = 250e3;
  GainTrace gain;
  Spectrum spectrum;
};

/// Random OOK over `sweep.spectrum_window` from the warm state; spectrum of
/// the single-pass gain sampled every `decimation` steps.
GainSpectrumResult gain_spectrum_experiment(const RunConfig& base, const CavitySimulator& warm, long decimation = 30);

/// Full-rate P_out around a burst of modulated bits.
struct Capture {
  Waveform p_out;
  Waveform control;  ///< s[n] on the same grid
  Bitstream tx;
  LinkTiming timing;
  long round_trip_steps = 0;
};

/// Random OOK runs for `sweep.modulation_lead` from the warm state's time so
/// the cavity settles under the extra mean loss, then `tx` follows. The
/// record starts two round trips before the first bit of `tx`.
Capture modulated_capture(const RunConfig& base, const CavitySimulator& warm, const Bitstream& tx);

struct BerCell {
  double sample_rate_hz = 0.0;
  int adc_bits = 0;
  double noise_variance = 0.0;
  BerReport report;
};

/// Every (rate, bits, noise) cell of the sweep grid, sorted by noise, bits,
/// rate. Cells with equal noise share one noise realisation.
std::vector<BerCell> ber_grid(const RunConfig& base, const Capture& capture);

/// Round-trip hint for the delay search: explicit steps, else the distance
/// hint (one-way optical path in metres), else the cavity's own value.
long round_trip_hint(const DemodConfig& demod, const CavityConfig& cavity);

}  // namespace resobeam
