#include "resobeam/waveform.hpp"

#include <cmath>

#include "resobeam/errors.hpp"

namespace resobeam {

void Waveform::check_finite(const char* what) const {
  if (!(dt > 0.0)) throw SimulationFault(std::string(what) + ": sample interval must be > 0");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!std::isfinite(samples[k])) {
      throw SimulationFault(std::string(what) + ": non-finite sample at index " + std::to_string(k));
    }
  }
}

}  // namespace resobeam
