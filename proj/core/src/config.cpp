#include "resobeam/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "resobeam/csv.hpp"
#include "resobeam/errors.hpp"

namespace resobeam {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

double to_real(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int to_int(std::string_view s) {
  s = trim(s);
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool is_auto(std::string_view s) { return trim(s) == "auto"; }
bool is_empty_list(std::string_view s) { return trim(s).empty() || trim(s) == "none"; }

std::vector<double> to_reals(std::string_view s) {
  std::vector<double> out;
  if (is_empty_list(s)) return out;
  for (auto part : split(s, ',')) out.push_back(to_real(part));
  return out;
}

/// "a b c; a b c" -> rows of exactly `width` numbers.
std::vector<std::vector<double>> to_rows(std::string_view s, std::size_t width) {
  std::vector<std::vector<double>> rows;
  if (is_empty_list(s)) return rows;
  for (auto part : split(s, ';')) {
    if (part.empty()) continue;
    std::vector<double> row;
    for (auto w : words(part)) row.push_back(to_real(w));
    if (row.size() != width) {
      throw std::invalid_argument("each entry needs " + std::to_string(width) + " numbers, got '" + std::string(part) + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return v.empty() ? "none" : out;
}

std::string join_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return "none";
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r) out += "; ";
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c) out += ' ';
      out += format_double(rows[r][c]);
    }
  }
  return out;
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class Acc>
Key real(std::string name, Acc acc) {
  return {std::move(name), [acc](RunConfig& c, std::string_view v) { acc(c) = to_real(v); },
          [acc](const RunConfig& c) { return format_double(acc(c)); }};
}

template <class Acc>
Key integer(std::string name, Acc acc) {
  return {std::move(name),
          [acc](RunConfig& c, std::string_view v) {
            auto& ref = acc(c);
            ref = to_int<std::remove_reference_t<decltype(ref)>>(v);
          },
          [acc](const RunConfig& c) { return std::to_string(acc(c)); }};
}

template <class Acc>
Key opt_real(std::string name, Acc acc) {
  return {std::move(name),
          [acc](RunConfig& c, std::string_view v) {
            if (is_auto(v)) {
              acc(c).reset();
            } else {
              acc(c) = to_real(v);
            }
          },
          [acc](const RunConfig& c) { return acc(c) ? format_double(*acc(c)) : std::string("auto"); }};
}

template <class Acc>
Key opt_integer(std::string name, Acc acc) {
  return {std::move(name),
          [acc](RunConfig& c, std::string_view v) {
            if (is_auto(v)) {
              acc(c).reset();
            } else {
              acc(c) = to_int<long>(v);
            }
          },
          [acc](const RunConfig& c) { return acc(c) ? std::to_string(*acc(c)) : std::string("auto"); }};
}

template <class Acc>
Key reals(std::string name, Acc acc) {
  return {std::move(name), [acc](RunConfig& c, std::string_view v) { acc(c) = to_reals(v); },
          [acc](const RunConfig& c) { return join_reals(acc(c)); }};
}

/// Geometry positions: explicit values switch off the automatic layout.
template <class Acc>
Key position(std::string name, Acc acc) {
  return {std::move(name),
          [acc](RunConfig& c, std::string_view v) {
            if (is_auto(v)) return;
            acc(c.geometry) = to_real(v);
            c.explicit_positions = true;
          },
          [acc](const RunConfig& c) {
            return c.explicit_positions ? format_double(acc(c.geometry)) : std::string("auto");
          }};
}

using Factors = PumpChain::Factors;

Key factor(std::string name, double Factors::*field) {
  return {std::move(name),
          [field](RunConfig& c, std::string_view v) {
            if (is_auto(v)) return;
            if (!c.pump_chain.factors) c.pump_chain.factors.emplace();
            (*c.pump_chain.factors).*field = to_real(v);
          },
          [field](const RunConfig& c) {
            return c.pump_chain.factors ? format_double((*c.pump_chain.factors).*field) : std::string("auto");
          }};
}

Key filter(std::string name, FilterSpec DemodConfig::*spec, double FilterSpec::*field) {
  return {std::move(name), [=](RunConfig& c, std::string_view v) { (c.demod.*spec).*field = to_real(v); },
          [=](const RunConfig& c) { return format_double((c.demod.*spec).*field); }};
}

const std::vector<Key>& registry() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    k.push_back(real("geometry.f", [](auto& c) -> auto& { return c.geometry.f; }));
    k.push_back(real("geometry.l", [](auto& c) -> auto& { return c.geometry.l; }));
    k.push_back(real("geometry.d", [](auto& c) -> auto& { return c.geometry.d; }));
    k.push_back(real("geometry.gain_offset", [](auto& c) -> auto& { return c.gain_offset; }));
    k.push_back(position("geometry.z_M1", [](auto& g) -> auto& { return g.z_M1; }));
    k.push_back(position("geometry.z_L1", [](auto& g) -> auto& { return g.z_L1; }));
    k.push_back(position("geometry.z_L2", [](auto& g) -> auto& { return g.z_L2; }));
    k.push_back(position("geometry.z_M2", [](auto& g) -> auto& { return g.z_M2; }));
    k.push_back(position("geometry.z_g", [](auto& g) -> auto& { return g.z_g; }));

    k.push_back(real("loss.R_M1_EOM", [](auto& c) -> auto& { return c.loss.R_M1_EOM; }));
    k.push_back(real("loss.Gamma_L1", [](auto& c) -> auto& { return c.loss.Gamma_L1; }));
    k.push_back(real("loss.Gamma_L2", [](auto& c) -> auto& { return c.loss.Gamma_L2; }));
    k.push_back(real("loss.Gamma_g", [](auto& c) -> auto& { return c.loss.Gamma_g; }));
    k.push_back(real("loss.Gamma_air", [](auto& c) -> auto& { return c.loss.Gamma_air; }));
    k.push_back(real("loss.Gamma_diff", [](auto& c) -> auto& { return c.loss.Gamma_diff; }));
    k.push_back(real("loss.R_M2", [](auto& c) -> auto& { return c.loss.R_M2; }));

    k.push_back(real("medium.sigma", [](auto& c) -> auto& { return c.medium.sigma; }));
    k.push_back(real("medium.tau_f", [](auto& c) -> auto& { return c.medium.tau_f; }));
    k.push_back(real("medium.tau_21", [](auto& c) -> auto& { return c.medium.tau_21; }));
    k.push_back(real("medium.beta", [](auto& c) -> auto& { return c.medium.beta; }));
    k.push_back(real("medium.I_s", [](auto& c) -> auto& { return c.medium.I_s; }));
    k.push_back(real("medium.a_g", [](auto& c) -> auto& { return c.medium.a_g; }));
    k.push_back(real("medium.l_g", [](auto& c) -> auto& { return c.medium.l_g; }));
    k.push_back(real("medium.lambda", [](auto& c) -> auto& { return c.medium.lambda; }));
    k.push_back(integer("medium.n_slices", [](auto& c) -> auto& { return c.medium.n_slices; }));
    k.push_back(real("medium.c", [](auto& c) -> auto& { return c.medium.c; }));
    k.push_back(real("medium.h", [](auto& c) -> auto& { return c.medium.h; }));

    k.push_back(opt_real("pump.eta_c", [](auto& c) -> auto& { return c.pump_chain.eta_c; }));
    k.push_back(factor("pump.eta_p", &Factors::eta_p));
    k.push_back(factor("pump.eta_t", &Factors::eta_t));
    k.push_back(factor("pump.eta_a", &Factors::eta_a));
    k.push_back(factor("pump.eta_Q", &Factors::eta_Q));
    k.push_back(factor("pump.eta_S", &Factors::eta_S));
    k.push_back(factor("pump.eta_B", &Factors::eta_B));
    k.push_back(real("pump.P_in", [](auto& c) -> auto& { return c.P_in; }));
    k.push_back({"pump.schedule",
                 [](RunConfig& c, std::string_view v) {
                   c.pump_schedule.clear();
                   for (const auto& r : to_rows(v, 3)) c.pump_schedule.push_back({r[0], r[1], r[2]});
                 },
                 [](const RunConfig& c) {
                   std::vector<std::vector<double>> rows;
                   for (const auto& p : c.pump_schedule) rows.push_back({p.t_start, p.t_end, p.power});
                   return join_rows(rows);
                 }});

    k.push_back(opt_integer("cavity.n_L", [](auto& c) -> auto& { return c.n_L; }));
    k.push_back(opt_integer("cavity.n_R", [](auto& c) -> auto& { return c.n_R; }));

    k.push_back(real("scenario.duration", [](auto& c) -> auto& { return c.duration; }));
    k.push_back({"scenario.intrusions",
                 [](RunConfig& c, std::string_view v) {
                   c.intrusions.clear();
                   for (const auto& r : to_rows(v, 3)) c.intrusions.push_back({r[0], r[1], r[2]});
                 },
                 [](const RunConfig& c) {
                   std::vector<std::vector<double>> rows;
                   for (const auto& e : c.intrusions) rows.push_back({e.t_start, e.ramp, e.t_reopen});
                   return join_rows(rows);
                 }});

    k.push_back(real("modulation.bit_rate", [](auto& c) -> auto& { return c.bit_rate; }));
    k.push_back(real("modulation.bias", [](auto& c) -> auto& { return c.bias; }));
    k.push_back({"modulation.bits", [](RunConfig& c, std::string_view v) { c.bits = std::string(trim(v)); },
                 [](const RunConfig& c) { return c.bits; }});
    k.push_back({"modulation.windows",
                 [](RunConfig& c, std::string_view v) {
                   c.modulation_windows.clear();
                   for (const auto& r : to_rows(v, 2)) c.modulation_windows.push_back({r[0], r[1]});
                 },
                 [](const RunConfig& c) {
                   std::vector<std::vector<double>> rows;
                   for (const auto& w : c.modulation_windows) rows.push_back({w.t_start, w.t_end});
                   return join_rows(rows);
                 }});

    k.push_back({"record.channels",
                 [](RunConfig& c, std::string_view v) {
                   c.channels.clear();
                   for (auto part : split(v, ',')) {
                     const auto ch = parse_channel(std::string(part));
                     if (!ch) throw std::invalid_argument("unknown channel '" + std::string(part) + "'");
                     c.channels.push_back(*ch);
                   }
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.channels.size(); ++i) out += (i ? ", " : "") + channel_name(c.channels[i]);
                   return out;
                 }});
    k.push_back(integer("record.decimation", [](auto& c) -> auto& { return c.decimation; }));
    k.push_back({"record.windows",
                 [](RunConfig& c, std::string_view v) {
                   c.record_windows.clear();
                   for (const auto& r : to_rows(v, 3)) {
                     if (r[2] != std::floor(r[2])) throw std::invalid_argument("window decimation must be an integer");
                     c.record_windows.push_back({r[0], r[1], static_cast<long>(r[2])});
                   }
                 },
                 [](const RunConfig& c) {
                   std::vector<std::vector<double>> rows;
                   for (const auto& w : c.record_windows) rows.push_back({w.t_start, w.t_end, static_cast<double>(w.decimation)});
                   return join_rows(rows);
                 }});

    k.push_back(real("demod.split_ratio", [](auto& c) -> auto& { return c.demod.split_ratio; }));
    k.push_back(real("demod.responsivity", [](auto& c) -> auto& { return c.demod.responsivity; }));
    k.push_back(real("demod.load_ohm", [](auto& c) -> auto& { return c.demod.load_ohm; }));
    k.push_back(filter("demod.lpf1_passband", &DemodConfig::lpf1, &FilterSpec::passband_hz));
    k.push_back(filter("demod.lpf1_stopband", &DemodConfig::lpf1, &FilterSpec::stopband_hz));
    k.push_back(filter("demod.lpf1_attenuation", &DemodConfig::lpf1, &FilterSpec::attenuation_db));
    k.push_back(filter("demod.lpf2_passband", &DemodConfig::lpf2, &FilterSpec::passband_hz));
    k.push_back(filter("demod.lpf2_stopband", &DemodConfig::lpf2, &FilterSpec::stopband_hz));
    k.push_back(filter("demod.lpf2_attenuation", &DemodConfig::lpf2, &FilterSpec::attenuation_db));
    k.push_back(real("demod.adc_interval", [](auto& c) -> auto& { return c.demod.adc_interval; }));
    k.push_back(integer("demod.adc_bits", [](auto& c) -> auto& { return c.demod.adc_bits; }));
    k.push_back(real("demod.adc_full_scale", [](auto& c) -> auto& { return c.demod.adc_full_scale; }));
    k.push_back(opt_integer("demod.round_trip_steps", [](auto& c) -> auto& { return c.demod.round_trip_steps; }));
    k.push_back(opt_real("demod.distance_hint", [](auto& c) -> auto& { return c.demod.distance_hint; }));
    k.push_back(integer("demod.delay_search", [](auto& c) -> auto& { return c.demod.delay_search; }));
    k.push_back(integer("demod.segment_length", [](auto& c) -> auto& { return c.demod.segment_length; }));
    k.push_back(integer("demod.training_bits", [](auto& c) -> auto& { return c.demod.training_bits; }));
    k.push_back(real("demod.noise_variance", [](auto& c) -> auto& { return c.demod.noise_variance; }));
    k.push_back(real("demod.divide_floor", [](auto& c) -> auto& { return c.demod.divide_floor; }));
    k.push_back({"demod.upsampling",
                 [](RunConfig& c, std::string_view v) {
                   const auto t = trim(v);
                   if (t == "linear") {
                     c.demod.upsampling = Upsampling::Linear;
                   } else if (t == "hold") {
                     c.demod.upsampling = Upsampling::Hold;
                   } else {
                     throw std::invalid_argument("expected 'linear' or 'hold'");
                   }
                 },
                 [](const RunConfig& c) { return std::string(c.demod.upsampling == Upsampling::Linear ? "linear" : "hold"); }});

    k.push_back(reals("sweep.steady_P_in", [](auto& c) -> auto& { return c.sweep.steady_P_in; }));
    k.push_back(reals("sweep.steady_R_M2", [](auto& c) -> auto& { return c.sweep.steady_R_M2; }));
    k.push_back(real("sweep.steady_duration", [](auto& c) -> auto& { return c.sweep.steady_duration; }));
    k.push_back(real("sweep.steady_tail", [](auto& c) -> auto& { return c.sweep.steady_tail; }));
    k.push_back(reals("sweep.relax_P_in", [](auto& c) -> auto& { return c.sweep.relax_P_in; }));
    k.push_back(reals("sweep.relax_R_M2", [](auto& c) -> auto& { return c.sweep.relax_R_M2; }));
    k.push_back(real("sweep.relax_duration", [](auto& c) -> auto& { return c.sweep.relax_duration; }));
    k.push_back(real("sweep.warmup", [](auto& c) -> auto& { return c.sweep.warmup; }));
    k.push_back(real("sweep.intrusion_dwell", [](auto& c) -> auto& { return c.sweep.intrusion_dwell; }));
    k.push_back(real("sweep.intrusion_after", [](auto& c) -> auto& { return c.sweep.intrusion_after; }));
    k.push_back(real("sweep.spectrum_window", [](auto& c) -> auto& { return c.sweep.spectrum_window; }));
    k.push_back(real("sweep.modulation_on", [](auto& c) -> auto& { return c.sweep.modulation_on; }));
    k.push_back(real("sweep.modulation_after", [](auto& c) -> auto& { return c.sweep.modulation_after; }));
    k.push_back(real("sweep.modulation_lead", [](auto& c) -> auto& { return c.sweep.modulation_lead; }));
    k.push_back(integer("sweep.demo_bits", [](auto& c) -> auto& { return c.sweep.demo_bits; }));
    k.push_back(reals("sweep.ber_rates", [](auto& c) -> auto& { return c.sweep.ber_rates; }));
    k.push_back({"sweep.ber_adc_bits",
                 [](RunConfig& c, std::string_view v) {
                   c.sweep.ber_adc_bits.clear();
                   if (is_empty_list(v)) return;
                   for (auto part : split(v, ',')) c.sweep.ber_adc_bits.push_back(to_int<int>(part));
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.sweep.ber_adc_bits.size(); ++i) {
                     out += (i ? ", " : "") + std::to_string(c.sweep.ber_adc_bits[i]);
                   }
                   return c.sweep.ber_adc_bits.empty() ? std::string("none") : out;
                 }});
    k.push_back(reals("sweep.ber_noise", [](auto& c) -> auto& { return c.sweep.ber_noise; }));
    k.push_back(integer("sweep.ber_bit_count", [](auto& c) -> auto& { return c.sweep.ber_bit_count; }));

    k.push_back({"run.out", [](RunConfig& c, std::string_view v) { c.out_dir = std::string(trim(v)); },
                 [](const RunConfig& c) { return c.out_dir.string(); }});
    k.push_back(integer("run.seed", [](auto& c) -> auto& { return c.seed; }));
    return k;
  }();
  return keys;
}

const Key* find_key(std::string_view name) {
  static const std::map<std::string, const Key*, std::less<>> index = [] {
    std::map<std::string, const Key*, std::less<>> m;
    for (const auto& k : registry()) m.emplace(k.name, &k);
    return m;
  }();
  const auto it = index.find(name);
  return it == index.end() ? nullptr : it->second;
}

std::string located(const std::string& origin, int line, int column, const std::string& what) {
  return origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what;
}

void sorted_windows(std::vector<std::string>& issues, const std::string& key, const std::vector<TimeWindow>& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i].t_end > w[i].t_start)) issues.push_back(key + "[" + std::to_string(i) + "]: end must follow start");
  }
}

}  // namespace

CavityGeometry RunConfig::resolved_geometry() const {
  CavityGeometry g = geometry;
  g.a_g = medium.a_g;
  g.lambda = medium.lambda;
  if (!explicit_positions) {
    g.z_M1 = 0.0;
    g.z_L1 = g.l;
    g.z_g = g.z_L1 - gain_offset;
    g.relayout();
  }
  return g;
}

GainMediumParams RunConfig::resolved_medium() const {
  GainMediumParams m = medium;
  m.eta_c = pump_chain.combined();
  return m;
}

CavityConfig RunConfig::cavity() const {
  CavityConfig cfg = CavityConfig::from_geometry(resolved_geometry(), loss, resolved_medium());
  if (n_L) cfg.n_L = *n_L;
  if (n_R) cfg.n_R = *n_R;
  return cfg;
}

Bitstream RunConfig::bitstream() const {
  constexpr std::string_view random_tag = "random:";
  constexpr std::string_view file_tag = "file:";
  const std::string_view spec = bits;
  if (spec.starts_with(random_tag)) {
    const auto count = to_int<std::size_t>(spec.substr(random_tag.size()));
    return random_bitstream(count, seed);
  }
  if (spec.starts_with(file_tag)) return read_bitstream(std::string(spec.substr(file_tag.size())));
  return parse_bitstream(spec);
}

Scenario RunConfig::scenario() const {
  Scenario s;
  s.duration = duration;
  if (pump_schedule.empty()) {
    s.pump = {{0.0, duration, P_in}};
  } else {
    s.pump = pump_schedule;
  }
  s.intrusions = intrusions;
  s.modulation_windows = modulation_windows;
  s.modulation.bit_rate = bit_rate;
  s.modulation.bias = bias;
  if (!modulation_windows.empty()) s.modulation.bits = bitstream();
  s.channels = channels;
  s.decimation = decimation;
  s.record_windows = record_windows;
  return s;
}

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> issues;
  const auto add = [&](std::vector<std::string> more) { issues.insert(issues.end(), more.begin(), more.end()); };

  const CavityGeometry g = resolved_geometry();
  add(g.validate());
  if (!explicit_positions && !(gain_offset >= 0.0 && gain_offset <= g.l)) {
    issues.emplace_back("geometry.gain_offset must be in [0, l]");
  }
  if (g.validate().empty()) {
    const Stability st = is_stable(g);
    if (!st.stable) {
      issues.push_back("geometry: unstable cavity (g1*g2 = " + format_double(st.margin) +
                       ", need 0 < g1*g2 < 1); check geometry.f, geometry.l, geometry.d");
    }
  }
  add(loss.validate());
  add(medium.validate());
  add(pump_chain.validate());
  if (!(P_in >= 0.0)) issues.emplace_back("pump.P_in must be >= 0");
  if (n_L && *n_L < 1) issues.emplace_back("cavity.n_L must be >= 1");
  if (n_R && *n_R < 1) issues.emplace_back("cavity.n_R must be >= 1");

  if (!(duration > 0.0)) issues.emplace_back("scenario.duration must be > 0");
  if (decimation < 1) issues.emplace_back("record.decimation must be >= 1");
  if (channels.empty()) issues.emplace_back("record.channels must name at least one channel");
  if (!(bit_rate > 0.0)) issues.emplace_back("modulation.bit_rate must be > 0");
  if (!(bias >= 0.0 && bias <= 1.0)) issues.emplace_back("modulation.bias must be in [0, 1]");
  sorted_windows(issues, "modulation.windows", modulation_windows);
  if (medium.validate().empty()) {
    const double dt = medium.time_step();
    if (bit_rate > 0.0 && 1.0 / (bit_rate * dt) < 2.0) {
      issues.emplace_back("modulation.bit_rate: bit period must span at least two steps of l_g / c");
    }
    if (demod.adc_interval > 0.0 && demod.adc_interval < dt * (1.0 - 1e-12)) {
      issues.emplace_back("demod.adc_interval must be >= the simulation step l_g / c");
    }
    for (double r : sweep.ber_rates) {
      if (!(r > 0.0) || 1.0 / r < dt * (1.0 - 1e-12)) {
        issues.emplace_back("sweep.ber_rates: every rate must be > 0 and at most c / l_g");
        break;
      }
    }
  }
  try {
    if (bitstream().empty()) issues.emplace_back("modulation.bits: empty bitstream");
  } catch (const std::exception& e) {
    issues.push_back(std::string("modulation.bits: ") + e.what());
  }
  add(demod.validate());
  for (double r : sweep.steady_R_M2) {
    if (!(r > 0.0 && r < 1.0)) issues.emplace_back("sweep.steady_R_M2: values must be in (0, 1)");
  }
  for (double r : sweep.relax_R_M2) {
    if (!(r > 0.0 && r < 1.0)) issues.emplace_back("sweep.relax_R_M2: values must be in (0, 1)");
  }
  for (int b : sweep.ber_adc_bits) {
    if (b < 1 || b > 30) issues.emplace_back("sweep.ber_adc_bits: values must be in [1, 30]");
  }
  for (double v : sweep.ber_noise) {
    if (!(v >= 0.0)) issues.emplace_back("sweep.ber_noise: variances must be >= 0");
  }
  if (!(sweep.steady_tail > 0.0 && sweep.steady_tail <= 1.0)) issues.emplace_back("sweep.steady_tail must be in (0, 1]");
  if (sweep.demo_bits < 1) issues.emplace_back("sweep.demo_bits must be >= 1");
  if (sweep.ber_bit_count < 1) issues.emplace_back("sweep.ber_bit_count must be >= 1");
  if (!(sweep.modulation_lead >= 0.0)) issues.emplace_back("sweep.modulation_lead must be >= 0");
  for (const double t : {sweep.steady_duration, sweep.relax_duration, sweep.warmup, sweep.intrusion_dwell,
                         sweep.intrusion_after, sweep.spectrum_window, sweep.modulation_on, sweep.modulation_after}) {
    if (!(t > 0.0)) {
      issues.emplace_back("sweep: every duration must be > 0");
      break;
    }
  }

  if (issues.empty()) {
    // Scenario-level rules (ordering, overlaps) on the assembled scenario.
    try {
      add(scenario().validate());
    } catch (const std::exception& e) {
      issues.push_back(std::string("scenario: ") + e.what());
    }
  }
  return issues;
}

RunConfig parse_config(std::string_view text, const std::string& origin) {
  RunConfig cfg;
  std::vector<std::string> issues;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    const int column = static_cast<int>(first) + 1;
    const std::string_view body = trim(raw);

    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(origin, line_no, column, "unterminated section header");
      section = std::string(trim(body.substr(1, body.size() - 2)));
      if (section.empty() || section.find_first_of(" \t=.") != std::string::npos) {
        throw ConfigError(origin, line_no, column + 1, "bad section name");
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(origin, line_no, column, "expected 'key = value'");
    const std::string_view key = trim(body.substr(0, eq));
    if (key.empty()) throw ConfigError(origin, line_no, column, "missing key before '='");
    const std::string_view value = trim(body.substr(eq + 1));
    const int value_column = column + static_cast<int>(body.find_first_not_of(" \t", eq + 1) == std::string_view::npos
                                                           ? eq + 1
                                                           : body.find_first_not_of(" \t", eq + 1));

    const std::string full = key.find('.') == std::string_view::npos && !section.empty()
                                 ? section + "." + std::string(key)
                                 : std::string(key);
    const Key* k = find_key(full);
    if (!k) {
      issues.push_back(located(origin, line_no, column, "unknown key '" + full + "'"));
      continue;
    }
    try {
      k->set(cfg, value);
    } catch (const std::exception& e) {
      issues.push_back(located(origin, line_no, value_column, full + ": " + e.what()));
    }
  }
  // Value checks run even after key errors so one pass reports everything.
  for (auto& v : cfg.validate()) issues.push_back(std::move(v));
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path.string() + ": cannot open config file"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments) {
  std::vector<std::string> issues;
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) {
      issues.push_back("--set " + a + ": expected section.key=value");
      continue;
    }
    const std::string key(trim(std::string_view(a).substr(0, eq)));
    const Key* k = find_key(key);
    if (!k) {
      issues.push_back("--set: unknown key '" + key + "'");
      continue;
    }
    try {
      k->set(cfg, std::string_view(a).substr(eq + 1));
    } catch (const std::exception& e) {
      issues.push_back("--set " + key + ": " + e.what());
    }
  }
  for (auto& v : cfg.validate()) issues.push_back(std::move(v));
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& k : registry()) {
    const auto dot = k.name.find('.');
    const std::string sec = k.name.substr(0, dot);
    if (sec != section) {
      out += (section.empty() ? "" : "\n") + std::string("[") + sec + "]\n";
      section = sec;
    }
    out += k.name.substr(dot + 1) + " = " + k.get(cfg) + "\n";
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> names;
  for (const auto& k : registry()) names.push_back(k.name);
  return names;
}

}  // namespace resobeam
