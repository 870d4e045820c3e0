#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace resobeam {

/// Uniformly sampled real signal. Sample k sits at t_start + k * dt.
struct Waveform {
  std::vector<double> samples;
  double dt = 1.0;
  std::string unit;
  double t_start = 0.0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double time_at(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
  double duration() const { return static_cast<double>(samples.size()) * dt; }

  /// Throws SimulationFault if dt <= 0 or any sample is NaN/Inf.
  void check_finite(const char* what) const;
};

}  // namespace resobeam
