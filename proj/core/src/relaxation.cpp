#include "resobeam/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace resobeam {

RelaxationMetrics analyse_relaxation(const Waveform& power, const RelaxationOptions& opt) {
  if (power.size() < 4) throw std::invalid_argument("analyse_relaxation: trace too short");
  if (!(opt.tail_fraction > 0.0 && opt.tail_fraction <= 1.0)) {
    throw std::invalid_argument("analyse_relaxation: tail_fraction must be in (0, 1]");
  }
  const auto& p = power.samples;
  const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(opt.tail_fraction * static_cast<double>(p.size())));
  RelaxationMetrics m;
  m.steady = std::accumulate(p.end() - static_cast<std::ptrdiff_t>(tail), p.end(), 0.0) / static_cast<double>(tail);
  const auto peak = std::max_element(p.begin(), p.end());
  m.peak = *peak;
  m.peak_time = power.time_at(static_cast<std::size_t>(peak - p.begin()));
  m.lasing = m.steady > opt.lasing_floor;
  if (!m.lasing) return m;

  m.peak_to_steady = m.peak / m.steady;
  const double band = opt.settle_band * m.steady;
  std::size_t last_out = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (std::abs(p[k] - m.steady) > band) last_out = k;
  }
  m.settle_time = power.time_at(last_out);

  std::vector<double> ups;
  for (std::size_t k = static_cast<std::size_t>(peak - p.begin()); k + 1 <= last_out && k + 1 < p.size(); ++k) {
    if (p[k] < m.steady && p[k + 1] >= m.steady) {
      const double frac = (m.steady - p[k]) / (p[k + 1] - p[k]);
      ups.push_back(power.time_at(k) + frac * power.dt);
    }
  }
  if (ups.size() >= 2) {
    m.cycles = ups.size() - 1;
    m.frequency_hz = static_cast<double>(m.cycles) / (ups.back() - ups.front());
  }
  return m;
}

}  // namespace resobeam
