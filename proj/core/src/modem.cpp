#include "resobeam/modem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "resobeam/errors.hpp"

namespace resobeam {
namespace {

Waveform crop(const Waveform& w, std::size_t begin, std::size_t end) {
  Waveform out;
  out.dt = w.dt;
  out.unit = w.unit;
  out.t_start = w.time_at(begin);
  out.samples.assign(w.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                     w.samples.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

struct PhaseScore {
  std::size_t errors = std::numeric_limits<std::size_t>::max();
  double spread = std::numeric_limits<double>::infinity();
};

bool better(const PhaseScore& a, const PhaseScore& b) {
  if (a.errors != b.errors) return a.errors < b.errors;
  return a.spread < b.spread;
}

}  // namespace

Bitstream parse_bitstream(std::string_view text) {
  Bitstream bits;
  bits.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw ConfigError({"bitstream: unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i)});
    }
  }
  return bits;
}

Bitstream read_bitstream(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"bitstream: cannot open " + path.string()});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bitstream(buf.str());
}

Bitstream random_bitstream(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Bitstream bits(count);
  for (auto& b : bits) b = static_cast<std::uint8_t>(gen() >> 63);
  return bits;
}

std::vector<std::string> ModulationConfig::validate() const {
  std::vector<std::string> issues;
  if (!(bit_rate > 0.0)) issues.emplace_back("modulation.bit_rate must be > 0");
  if (!(bias >= 0.0 && bias <= 1.0)) issues.emplace_back("modulation.bias must be in [0, 1]");
  return issues;
}

std::size_t samples_per_bit(double bit_rate, double dt) {
  const double ratio = 1.0 / (bit_rate * dt);
  const auto spb = static_cast<long long>(std::llround(ratio));
  if (!(ratio >= 2.0) || spb < 2) throw DemodError("bit period is shorter than two samples");
  return static_cast<std::size_t>(spb);
}

Waveform make_control_signal(const ModulationConfig& cfg, double dt, double duration) {
  if (cfg.bits.empty()) throw DemodError("make_control_signal: empty bitstream");
  const std::size_t spb = samples_per_bit(cfg.bit_rate, dt);
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  Waveform s;
  s.dt = dt;
  s.unit = "1";
  s.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) s.samples[k] = cfg.level(cfg.bits[(k / spb) % cfg.bits.size()]);
  return s;
}

std::vector<std::string> DemodConfig::validate() const {
  std::vector<std::string> issues;
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) issues.emplace_back("demod.split_ratio must be in (0, 1)");
  if (!(responsivity > 0.0)) issues.emplace_back("demod.responsivity must be > 0");
  if (!(load_ohm > 0.0)) issues.emplace_back("demod.load_ohm must be > 0");
  if (!(adc_interval > 0.0)) issues.emplace_back("demod.adc_interval must be > 0");
  if (adc_bits < 1 || adc_bits > 30) issues.emplace_back("demod.adc_bits must be in [1, 30]");
  if (!(adc_full_scale > 0.0)) issues.emplace_back("demod.adc_full_scale must be > 0");
  if (segment_length < 2) issues.emplace_back("demod.segment_length must be >= 2");
  if (training_bits < 1) issues.emplace_back("demod.training_bits must be >= 1");
  if (delay_search < 0) issues.emplace_back("demod.delay_search must be >= 0");
  if (!(noise_variance >= 0.0)) issues.emplace_back("demod.noise_variance must be >= 0");
  if (round_trip_steps && *round_trip_steps < 2) issues.emplace_back("demod.round_trip_steps must be >= 2");
  if (distance_hint && !(*distance_hint >= 0.0)) issues.emplace_back("demod.distance_hint must be >= 0");
  for (const auto* spec : {&lpf1, &lpf2}) {
    const char* name = spec == &lpf1 ? "demod.lpf1" : "demod.lpf2";
    if (!(spec->passband_hz > 0.0 && spec->passband_hz < spec->stopband_hz)) {
      issues.push_back(std::string(name) + ": need 0 < passband < stopband");
    }
    if (!(spec->attenuation_db > 0.0)) issues.push_back(std::string(name) + ": attenuation must be > 0 dB");
  }
  return issues;
}

Waveform photodetect(const Waveform& power, const DemodConfig& cfg, std::uint64_t seed) {
  Waveform v;
  v.dt = power.dt;
  v.t_start = power.t_start;
  v.unit = "V";
  v.samples.resize(power.size());
  const double gain = cfg.split_ratio * cfg.responsivity * cfg.load_ohm;
  if (cfg.noise_variance > 0.0) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(cfg.noise_variance));
    for (std::size_t k = 0; k < power.size(); ++k) v.samples[k] = gain * power.samples[k] + noise(gen);
  } else {
    for (std::size_t k = 0; k < power.size(); ++k) v.samples[k] = gain * power.samples[k];
  }
  return v;
}

AdcOutput adc(const Waveform& signal, const DemodConfig& cfg) {
  AdcOutput out;
  out.levels.dt = cfg.adc_interval;
  out.levels.t_start = signal.t_start;
  out.levels.unit = signal.unit;
  if (signal.empty()) return out;
  if (cfg.adc_interval < signal.dt * (1.0 - 1e-12)) throw DemodError("adc: T_adc is shorter than the input step");

  const double step = cfg.adc_full_scale / std::ldexp(1.0, cfg.adc_bits);
  const double top_code = std::ldexp(1.0, cfg.adc_bits) - 1.0;
  const double span = static_cast<double>(signal.size() - 1) * signal.dt;
  const auto count = static_cast<std::size_t>(std::floor(span / cfg.adc_interval + 1e-9)) + 1;
  out.levels.samples.reserve(count);
  out.source_index.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto idx = static_cast<std::size_t>(std::llround(static_cast<double>(k) * cfg.adc_interval / signal.dt));
    idx = std::min(idx, signal.size() - 1);
    double v = signal.samples[idx];
    if (v < 0.0 || v >= cfg.adc_full_scale) ++out.saturated;
    v = std::clamp(v, 0.0, cfg.adc_full_scale);
    const double code = std::min(std::floor(v / step), top_code);
    out.levels.samples.push_back(code * step);
    out.source_index.push_back(idx);
  }
  return out;
}

Waveform hold_to_grid(const AdcOutput& samples, const Waveform& grid) {
  Waveform out;
  out.dt = grid.dt;
  out.t_start = grid.t_start;
  out.unit = samples.levels.unit;
  out.samples.resize(grid.size());
  if (samples.levels.empty()) return out;
  std::size_t k = 0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    while (k + 1 < samples.source_index.size() && samples.source_index[k + 1] <= n) ++k;
    out.samples[n] = samples.levels.samples[k];
  }
  return out;
}

Waveform interpolate_to_grid(const AdcOutput& samples, const Waveform& grid) {
  Waveform out = hold_to_grid(samples, grid);
  const auto& idx = samples.source_index;
  const auto& lv = samples.levels.samples;
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    const std::size_t a = idx[k];
    const std::size_t b = std::min(idx[k + 1], out.size());
    if (b <= a) continue;
    const double span = static_cast<double>(idx[k + 1] - a);
    for (std::size_t n = a; n < b; ++n) {
      out.samples[n] = lv[k] + (lv[k + 1] - lv[k]) * static_cast<double>(n - a) / span;
    }
  }
  return out;
}

Waveform upsample(const AdcOutput& samples, const Waveform& grid, Upsampling mode) {
  return mode == Upsampling::Linear ? interpolate_to_grid(samples, grid) : hold_to_grid(samples, grid);
}

Divided delay_divide(const Waveform& x, std::size_t delay, double floor) {
  if (delay == 0) throw DemodError("delay_divide: delay must be >= 1");
  Divided d;
  d.ratio.dt = x.dt;
  d.ratio.t_start = x.t_start;
  d.ratio.unit = "1";
  d.ratio.samples.resize(x.size());
  d.valid.assign(x.size(), 0);
  d.warmup = std::min(delay, x.size());
  double last = 1.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (n >= delay && std::abs(x.samples[n - delay]) >= floor) {
      last = x.samples[n] / x.samples[n - delay];
      d.valid[n] = 1;
    } else {
      ++d.invalid;
    }
    d.ratio.samples[n] = last;
  }
  return d;
}

Decisions decide_bits(const Waveform& y, const SymbolTiming& timing, std::span<const std::uint8_t> training,
                      int segment_length) {
  if (segment_length < 2) throw DemodError("decide_bits: segment length must be >= 2");
  if (!(timing.samples_per_symbol >= 1.0)) throw DemodError("decide_bits: need >= 1 sample per symbol");
  const auto phases = static_cast<std::size_t>(std::floor(timing.samples_per_symbol));
  const auto sample_at = [&](std::size_t k, std::size_t phase) {
    return timing.first_sample + static_cast<std::size_t>(std::llround(static_cast<double>(k) * timing.samples_per_symbol)) +
           phase;
  };
  std::size_t symbols = timing.symbol_count;
  while (symbols > 0 && sample_at(symbols - 1, phases - 1) >= y.size()) --symbols;
  if (symbols == 0) throw DemodError("decide_bits: no complete symbol inside the waveform");

  const auto seg = static_cast<std::size_t>(segment_length);
  const std::size_t full_segments = symbols / seg;
  Decisions best;
  best.single_segment_fallback = full_segments == 0;
  const std::size_t segments = std::max<std::size_t>(1, full_segments);
  const std::size_t train = std::min(training.size(), symbols);

  PhaseScore best_score;
  std::vector<double> values(symbols);
  std::vector<double> thresholds(segments);
  Bitstream bits(symbols);
  for (std::size_t phase = 0; phase < phases; ++phase) {
    for (std::size_t k = 0; k < symbols; ++k) values[k] = y.samples[sample_at(k, phase)];
    for (std::size_t s = 0; s < segments; ++s) {
      const std::size_t begin = s * seg;
      const std::size_t end = (s + 1 == segments) ? symbols : begin + seg;
      thresholds[s] = std::accumulate(values.begin() + static_cast<std::ptrdiff_t>(begin),
                                      values.begin() + static_cast<std::ptrdiff_t>(end), 0.0) /
                      static_cast<double>(end - begin);
      for (std::size_t k = begin; k < end; ++k) bits[k] = values[k] > thresholds[s] ? 1 : 0;
    }
    PhaseScore score;
    score.errors = 0;
    double sum[2] = {0.0, 0.0};
    double sq[2] = {0.0, 0.0};
    std::size_t cnt[2] = {0, 0};
    for (std::size_t k = 0; k < train; ++k) {
      if (bits[k] != training[k]) ++score.errors;
      const int cls = training[k] ? 1 : 0;
      sum[cls] += values[k];
      sq[cls] += values[k] * values[k];
      ++cnt[cls];
    }
    if (cnt[0] > 0 && cnt[1] > 0) {
      const double m0 = sum[0] / cnt[0];
      const double m1 = sum[1] / cnt[1];
      const double var = (sq[0] - cnt[0] * m0 * m0 + sq[1] - cnt[1] * m1 * m1) / static_cast<double>(train);
      const double sep = (m1 - m0) * (m1 - m0);
      score.spread = sep > 0.0 ? std::max(0.0, var) / sep : std::numeric_limits<double>::infinity();
    }
    if (better(score, best_score)) {
      best_score = score;
      best.bits = bits;
      best.phase = phase;
      best.thresholds = thresholds;
      best.training_errors = score.errors;
      best.spread = score.spread;
    }
  }
  return best;
}

BerReport ber(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx) {
  if (tx.size() != rx.size()) {
    throw DemodError("ber: length mismatch (" + std::to_string(tx.size()) + " vs " + std::to_string(rx.size()) + ")");
  }
  if (tx.empty()) throw DemodError("ber: nothing to compare");
  BerReport r;
  r.bits_compared = tx.size();
  for (std::size_t k = 0; k < tx.size(); ++k) r.errors += (tx[k] != 0) != (rx[k] != 0);
  r.ber = static_cast<double>(r.errors) / static_cast<double>(r.bits_compared);
  return r;
}

ReceiverOutput receive(const Waveform& held, long delay, const DemodConfig& cfg, const LinkTiming& timing,
                       std::span<const std::uint8_t> tx, std::size_t symbols, std::size_t pre_delay) {
  if (delay < 1) throw DemodError("receive: delay must be >= 1");
  const Divided divided = delay_divide(held, static_cast<std::size_t>(delay), cfg.divide_floor);
  Filtered y = lowpass(divided.ratio, cfg.lpf2);
  ReceiverOutput out;
  out.group_delay = y.group_delay;
  SymbolTiming st;
  st.samples_per_symbol = 1.0 / (timing.bit_rate * held.dt);
  st.first_sample = timing.modulation_start + static_cast<std::size_t>(delay / 2) + pre_delay + y.group_delay;
  st.symbol_count = symbols;
  const std::size_t train = std::min<std::size_t>(static_cast<std::size_t>(cfg.training_bits), tx.size());
  out.decisions = decide_bits(y.wave, st, tx.first(train), cfg.segment_length);
  out.y = std::move(y.wave);
  return out;
}

DelaySearch estimate_delay(const Waveform& held, long hint, long window, const DemodConfig& cfg,
                           const LinkTiming& timing, std::span<const std::uint8_t> tx, std::size_t pre_delay) {
  if (window < 0 || hint - window < 1) throw DemodError("estimate_delay: empty or non-positive search window");
  const std::size_t train = std::min<std::size_t>(static_cast<std::size_t>(cfg.training_bits), tx.size());
  if (train == 0) throw DemodError("estimate_delay: no training bits");
  const double spb = 1.0 / (timing.bit_rate * held.dt);
  const std::size_t lpf2_taps = FirFilter::design_lowpass(cfg.lpf2, 1.0 / held.dt).taps().size();

  // Only the stretch holding the training symbols (plus its delayed partner
  // and filter margins) is processed for each candidate.
  const long max_delay = hint + window;
  const long centre = static_cast<long>(timing.modulation_start + pre_delay);
  const long begin = std::max(0L, centre - max_delay - static_cast<long>(lpf2_taps));
  const long end = std::min(static_cast<long>(held.size()),
                            centre + max_delay + static_cast<long>(lpf2_taps) +
                                static_cast<long>(std::ceil((static_cast<double>(train) + 2.0) * spb)));
  if (end <= begin) throw DemodError("estimate_delay: training segment outside the waveform");
  const Waveform part = crop(held, static_cast<std::size_t>(begin), static_cast<std::size_t>(end));
  LinkTiming local = timing;
  local.modulation_start = timing.modulation_start - static_cast<std::size_t>(begin);

  DelaySearch search;
  std::size_t best_errors = std::numeric_limits<std::size_t>::max();
  double best_spread = std::numeric_limits<double>::infinity();
  bool any = false;
  for (long d = hint - window; d <= hint + window; ++d) {
    ReceiverOutput r;
    try {
      r = receive(part, d, cfg, local, tx, train, pre_delay);
    } catch (const DemodError&) {
      continue;
    }
    const std::size_t compared = std::min(train, r.decisions.bits.size());
    if (compared == 0) continue;
    any = true;
    const std::size_t errors = r.decisions.training_errors;
    search.ber_by_delay.emplace_back(d, static_cast<double>(errors) / static_cast<double>(compared));
    if (errors < best_errors || (errors == best_errors && r.decisions.spread < best_spread)) {
      best_errors = errors;
      best_spread = r.decisions.spread;
      search.best = d;
    }
  }
  if (!any) throw DemodError("estimate_delay: every candidate delay produced invalid samples");
  return search;
}

FrontEnd front_end(const Waveform& p_out, const DemodConfig& cfg, std::uint64_t seed) {
  FrontEnd fe;
  fe.seed = seed;
  fe.voltage = photodetect(p_out, cfg, seed);
  fe.filtered = lowpass(fe.voltage, cfg.lpf1);
  return fe;
}

DemodResult demodulate(const FrontEnd& analog, const DemodConfig& cfg, const LinkTiming& timing,
                       std::span<const std::uint8_t> tx, long n_c_hint) {
  if (auto issues = cfg.validate(); !issues.empty()) throw ConfigError(std::move(issues));
  DemodResult result;
  result.voltage = analog.voltage;
  result.filtered = analog.filtered.wave;
  const AdcOutput sampled = adc(result.filtered, cfg);
  result.adc_saturated = sampled.saturated;
  result.held = upsample(sampled, result.filtered, cfg.upsampling);

  const std::size_t pre_delay = analog.filtered.group_delay;
  const long window = cfg.round_trip_steps ? 0 : cfg.delay_search;
  const long hint = cfg.round_trip_steps ? *cfg.round_trip_steps : n_c_hint;
  result.search = estimate_delay(result.held, hint, window, cfg, timing, tx, pre_delay);
  result.receiver = receive(result.held, result.search.best, cfg, timing, tx, tx.size(), pre_delay);

  const auto& rx = result.receiver.decisions.bits;
  result.report = ber(tx.first(rx.size()), rx);
  result.report.sample_rate_hz = 1.0 / cfg.adc_interval;
  result.report.adc_bits = cfg.adc_bits;
  result.report.noise_var = cfg.noise_variance;
  result.report.phase = result.receiver.decisions.phase;
  result.report.n_c = result.search.best;
  result.report.thresholds = result.receiver.decisions.thresholds;
  result.report.seed = analog.seed;
  return result;
}

DemodResult demodulate(const Waveform& p_out, const DemodConfig& cfg, const LinkTiming& timing,
                       std::span<const std::uint8_t> tx, long n_c_hint, std::uint64_t seed) {
  if (auto issues = cfg.validate(); !issues.empty()) throw ConfigError(std::move(issues));
  return demodulate(front_end(p_out, cfg, seed), cfg, timing, tx, n_c_hint);
}

}  // namespace resobeam
