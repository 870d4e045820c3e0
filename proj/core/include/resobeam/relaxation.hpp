#pragma once

#include <cstddef>

#include "resobeam/waveform.hpp"

namespace resobeam {

struct RelaxationMetrics {
  bool lasing = false;
  double steady = 0.0;          ///< mean over the tail of the trace
  double peak = 0.0;
  double peak_time = 0.0;       ///< s, absolute
  double peak_to_steady = 0.0;  ///< 0 when not lasing
  double frequency_hz = 0.0;    ///< from upward crossings of the steady level
  double settle_time = 0.0;     ///< s, last exit from the settle band
  std::size_t cycles = 0;
};

struct RelaxationOptions {
  double tail_fraction = 0.1;  ///< share of the trace averaged for the steady level
  double settle_band = 0.05;   ///< relative half-width around the steady level
  double lasing_floor = 1e-2;  ///< W; a steady level below this counts as dark
};

/// Start-up transient of an output-power trace. Below the lasing floor
/// frequency, ratio and settle time are reported as 0.
RelaxationMetrics analyse_relaxation(const Waveform& power, const RelaxationOptions& opt = {});

}  // namespace resobeam
