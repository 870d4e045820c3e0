#include "resobeam/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "resobeam/errors.hpp"
#include "resobeam/steady_state.hpp"

namespace resobeam {
namespace {

double tail_mean(const std::vector<double>& v, double fraction) {
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(v.size())));
  return std::accumulate(v.end() - static_cast<std::ptrdiff_t>(n), v.end(), 0.0) / static_cast<double>(n);
}

bool local_max(const std::vector<double>& p, std::size_t k) {
  return k > 0 && k + 1 < p.size() && p[k] > p[k - 1] && p[k] >= p[k + 1];
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

CavitySimulator warm_start(const CavityConfig& cavity, double P_in, double duration) {
  CavitySimulator sim(cavity);
  Scenario s;
  s.duration = duration;
  s.pump = {{0.0, duration, P_in}};
  s.decimation = std::numeric_limits<long>::max();
  run(s, sim);
  return sim;
}

SteadyPoint steady_point(const RunConfig& base, double P_in, double R_M2, double duration) {
  CavityConfig cavity = base.cavity();
  cavity.loss.R_M2 = R_M2;
  Scenario s;
  s.duration = duration;
  s.pump = {{0.0, duration, P_in}};
  s.channels = {Channel::OutputPower};
  s.decimation = kTraceDecimation;
  RunRecord rec = run(s, cavity);

  SteadyPoint pt;
  pt.P_in = P_in;
  pt.R_M2 = R_M2;
  pt.trace = std::move(rec.main.traces.front());
  pt.simulated = tail_mean(pt.trace.samples, base.sweep.steady_tail);
  const auto theory = output_power(P_in, cavity.loss, base.pump_chain, cavity.medium.a_g, cavity.medium.I_s);
  pt.theory = theory.watts;
  pt.below_threshold = theory.below_threshold;
  RelaxationOptions opt;
  opt.tail_fraction = base.sweep.steady_tail;
  pt.relaxation = analyse_relaxation(pt.trace, opt);
  return pt;
}

IntrusionResult intrusion_experiment(const RunConfig& base, const CavitySimulator& warm) {
  CavitySimulator sim = warm;
  const double dt = sim.config().dt();
  IntrusionResult r;
  Intrusion e = base.intrusions.empty() ? Intrusion{} : base.intrusions.front();
  e.t_start = sim.time();
  e.t_reopen = e.t_start + e.ramp + base.sweep.intrusion_dwell;
  r.t_start = e.t_start;
  r.t_reopen = e.t_reopen;

  Scenario s;
  s.duration = e.t_reopen + e.ramp + base.sweep.intrusion_after;
  s.pump = {{0.0, s.duration, sim.pump()}};
  s.intrusions = {e};
  s.channels = {Channel::OutputPower, Channel::Obstruction};
  s.decimation = kTraceDecimation;
  RunRecord rec = run(s, sim);
  r.power = std::move(rec.main.traces[0]);
  r.obstruction = std::move(rec.main.traces[1]);

  const auto& p = r.power.samples;
  const auto index_at = [&](double t) {
    return static_cast<std::size_t>(std::clamp<double>(std::ceil((t - r.power.t_start) / r.power.dt), 0.0,
                                                        static_cast<double>(p.size())));
  };
  r.steady_before = p.empty() ? 0.0 : p.front();
  const std::size_t closed = index_at(e.t_start + e.ramp + 5e-6);
  const std::size_t reopen = index_at(e.t_reopen);
  for (std::size_t k = closed; k < reopen; ++k) r.blocked_max = std::max(r.blocked_max, p[k]);

  std::size_t peak = reopen;
  for (std::size_t k = reopen; k < p.size(); ++k) {
    if (p[k] > p[peak]) peak = k;
  }
  if (peak >= p.size()) return r;
  r.pulse_peak = p[peak];
  r.pulse_time = r.power.time_at(peak);
  std::size_t a = peak;
  std::size_t b = peak;
  while (a > reopen && p[a] > 0.5 * r.pulse_peak) --a;
  while (b + 1 < p.size() && p[b] > 0.5 * r.pulse_peak) ++b;
  r.pulse_fwhm = static_cast<double>(b - a) * r.power.dt;
  for (std::size_t k = reopen; k < p.size(); ++k) {
    if (local_max(p, k) && p[k] > 0.5 * r.pulse_peak) ++r.pulses;
  }
  const double level = tail_mean(p, 0.1);
  for (std::size_t k = b; k < p.size(); ++k) {
    if (local_max(p, k) && p[k] > 1.05 * level) ++r.later_peaks;
  }
  (void)dt;
  return r;
}

GainSpectrumResult gain_spectrum_experiment(const RunConfig& base, const CavitySimulator& warm, long decimation) {
  CavitySimulator sim = warm;
  const double t0 = sim.time();
  Scenario s;
  s.duration = t0 + base.sweep.spectrum_window;
  s.pump = {{0.0, s.duration, sim.pump()}};
  s.modulation.bit_rate = base.bit_rate;
  s.modulation.bias = base.bias;
  const auto count = static_cast<std::size_t>(std::ceil(base.sweep.spectrum_window * base.bit_rate));
  s.modulation.bits = random_bitstream(count, mix_seed(base.seed, 1));
  s.modulation_windows = {{t0, s.duration}};
  s.channels = {Channel::GainInput, Channel::GainOutput};
  s.decimation = decimation;
  RunRecord rec = run(s, sim);

  GainSpectrumResult g;
  g.gain = gain_monitor(rec.main);
  if (g.gain.invalid > 0) throw SimulationFault("gain spectrum: gain monitor flagged samples in a lasing cavity");
  g.spectrum = spectrum(g.gain.gain, Window::Hann);
  g.low_band_fraction = low_band_energy_fraction(g.gain.gain, g.cutoff_hz, Window::Hann);
  return g;
}

Capture modulated_capture(const RunConfig& base, const CavitySimulator& warm, const Bitstream& tx) {
  if (tx.empty()) throw DemodError("modulated_capture: empty bitstream");
  CavitySimulator sim = warm;
  const double dt = sim.config().dt();
  const long n_c = sim.config().round_trip_steps();
  const auto spb = static_cast<std::int64_t>(samples_per_bit(base.bit_rate, dt));
  const std::int64_t begin = sim.step_index();
  const auto lead_bits = static_cast<std::size_t>(std::max(0.0, std::floor(base.sweep.modulation_lead / (spb * dt))));
  const std::int64_t tx_begin = begin + std::max<std::int64_t>(2 * n_c, spb * static_cast<std::int64_t>(lead_bits));
  const std::int64_t mod_begin = lead_bits > 0 ? tx_begin - spb * static_cast<std::int64_t>(lead_bits) : tx_begin;
  const std::int64_t mod_end = tx_begin + spb * static_cast<std::int64_t>(tx.size());
  const std::int64_t end = mod_end + 2 * n_c;

  Bitstream bits = random_bitstream(lead_bits, mix_seed(base.seed, 7));
  bits.insert(bits.end(), tx.begin(), tx.end());

  Scenario s;
  s.duration = static_cast<double>(end) * dt;
  s.pump = {{0.0, s.duration, sim.pump()}};
  s.modulation.bit_rate = base.bit_rate;
  s.modulation.bias = base.bias;
  s.modulation.bits = std::move(bits);
  s.modulation_windows = {{static_cast<double>(mod_begin) * dt, static_cast<double>(mod_end) * dt}};
  s.channels = {Channel::OutputPower, Channel::Modulator};
  s.decimation = std::numeric_limits<long>::max();
  const std::int64_t rec_begin = tx_begin - 2 * n_c;
  s.record_windows = {{static_cast<double>(rec_begin) * dt, static_cast<double>(end) * dt, 1}};
  RunRecord rec = run(s, sim);

  Capture c;
  c.p_out = std::move(rec.windows.front().traces[0]);
  c.control = std::move(rec.windows.front().traces[1]);
  c.tx = tx;
  c.timing.bit_rate = base.bit_rate;
  c.timing.modulation_start = static_cast<std::size_t>(tx_begin - rec_begin);
  c.round_trip_steps = n_c;
  return c;
}

std::vector<BerCell> ber_grid(const RunConfig& base, const Capture& capture) {
  const auto& sw = base.sweep;
  std::vector<FrontEnd> fronts(sw.ber_noise.size());
  parallel_for(fronts.size(), [&](std::size_t i) {
    DemodConfig cfg = base.demod;
    cfg.noise_variance = sw.ber_noise[i];
    fronts[i] = front_end(capture.p_out, cfg, mix_seed(base.seed, 100 + i));
  });

  std::vector<BerCell> cells;
  std::vector<std::size_t> noise_of;
  for (std::size_t i = 0; i < sw.ber_noise.size(); ++i) {
    for (int bits : sw.ber_adc_bits) {
      for (double rate : sw.ber_rates) {
        BerCell c;
        c.sample_rate_hz = rate;
        c.adc_bits = bits;
        c.noise_variance = sw.ber_noise[i];
        cells.push_back(c);
        noise_of.push_back(i);
      }
    }
  }
  parallel_for(cells.size(), [&](std::size_t k) {
    DemodConfig cfg = base.demod;
    cfg.noise_variance = cells[k].noise_variance;
    cfg.adc_interval = 1.0 / cells[k].sample_rate_hz;
    cfg.adc_bits = cells[k].adc_bits;
    cells[k].report = demodulate(fronts[noise_of[k]], cfg, capture.timing, capture.tx, capture.round_trip_steps).report;
  });
  std::stable_sort(cells.begin(), cells.end(), [](const BerCell& a, const BerCell& b) {
    if (a.noise_variance != b.noise_variance) return a.noise_variance < b.noise_variance;
    if (a.adc_bits != b.adc_bits) return a.adc_bits < b.adc_bits;
    return a.sample_rate_hz < b.sample_rate_hz;
  });
  return cells;
}

long round_trip_hint(const DemodConfig& demod, const CavityConfig& cavity) {
  if (demod.round_trip_steps) return *demod.round_trip_steps;
  if (demod.distance_hint) {
    return std::max(2L, std::lround(2.0 * *demod.distance_hint / (cavity.medium.c * cavity.dt())));
  }
  return cavity.round_trip_steps();
}

}  // namespace resobeam
