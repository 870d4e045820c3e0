#include "resobeam/presets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "resobeam/csv.hpp"
#include "resobeam/errors.hpp"
#include "resobeam/experiments.hpp"
#include "resobeam/steady_state.hpp"
#include "resobeam/svg_plot.hpp"

namespace resobeam {
namespace {

namespace fs = std::filesystem;

constexpr std::pair<PresetId, const char*> kNames[] = {
    {PresetId::SteadySweep, "fig7-steady-sweep"},
    {PresetId::RelaxationPin, "fig8a-relaxation-pin"},
    {PresetId::RelaxationRm2, "fig8b-relaxation-rm2"},
    {PresetId::Intrusion, "fig-intrusion"},
    {PresetId::ModulationResponse, "fig-modulation-response"},
    {PresetId::GainSpectrum, "fig-gain-spectrum"},
    {PresetId::Demodulation, "fig-demodulation"},
    {PresetId::BerSweep, "fig-ber-sweep"},
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

/// Output sink for one preset: registers every file it writes.
class Artifacts {
 public:
  Artifacts(fs::path dir, PresetReport& report) : dir_(std::move(dir)), report_(report) {
    fs::create_directories(dir_);
  }

  fs::path path(const std::string& name) {
    report_.files.push_back(dir_ / name);
    return dir_ / name;
  }

  void plot(const std::string& name, const Plot& p) { write_svg(p, path(name)); }

  void check(std::string name, bool pass, std::string detail) {
    report_.checks.push_back({std::move(name), pass, std::move(detail)});
  }

  void say(std::string line) { report_.summary.push_back(std::move(line)); }

 private:
  fs::path dir_;
  PresetReport& report_;
};

std::vector<double> times_of(const Waveform& w) {
  std::vector<double> t(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) t[k] = w.time_at(k);
  return t;
}

template <class T>
std::vector<T> every(const std::vector<T>& v, std::size_t stride) {
  std::vector<T> out;
  for (std::size_t k = 0; k < v.size(); k += stride) out.push_back(v[k]);
  return out;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], 4);
  return s;
}

struct Cell {
  double P_in;
  double R_M2;
  bool operator<(const Cell& o) const { return std::tie(P_in, R_M2) < std::tie(o.P_in, o.R_M2); }
};

std::map<Cell, SteadyPoint> run_cells(const RunConfig& cfg, const std::vector<Cell>& wanted, double duration) {
  std::vector<Cell> cells(wanted);
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end(),
                          [](const Cell& a, const Cell& b) { return !(a < b) && !(b < a); }),
              cells.end());
  std::vector<SteadyPoint> points(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) { points[i] = steady_point(cfg, cells[i].P_in, cells[i].R_M2, duration); });
  std::map<Cell, SteadyPoint> out;
  for (std::size_t i = 0; i < cells.size(); ++i) out.emplace(cells[i], std::move(points[i]));
  return out;
}

void steady_sweep(const RunConfig& cfg, Artifacts& art) {
  const auto& sw = cfg.sweep;
  std::vector<Cell> wanted;
  for (double p : sw.steady_P_in) wanted.push_back({p, cfg.loss.R_M2});
  for (double r : sw.steady_R_M2) wanted.push_back({cfg.P_in, r});
  const auto points = run_cells(cfg, wanted, sw.steady_duration);

  const double reference = output_power(cfg.P_in, cfg.loss, cfg.pump_chain, cfg.medium.a_g, cfg.medium.I_s).watts;
  double worst = 0.0;
  bool dark_ok = true;
  const auto table = [&](const std::string& name, const std::vector<Cell>& cells) {
    CsvWriter csv(art.path(name + ".csv"),
                  {"P_in_W", "R_M2", "P_out_sim_W", "P_out_theory_W", "rel_dev", "below_threshold"});
    Series sim{"simulated", {}, {}, true};
    Series theory{"closed form", {}, {}, false};
    for (const auto& c : cells) {
      const auto& pt = points.at(c);
      const double rel = pt.below_threshold ? 0.0 : (pt.simulated - pt.theory) / pt.theory;
      csv.row(std::vector<double>{pt.P_in, pt.R_M2, pt.simulated, pt.theory, rel, pt.below_threshold ? 1.0 : 0.0});
      if (pt.below_threshold) {
        dark_ok = dark_ok && pt.simulated <= 0.02 * reference;
      } else {
        worst = std::max(worst, std::abs(rel));
      }
      const double x = name == "steady_pin" ? pt.P_in : pt.R_M2;
      sim.x.push_back(x);
      sim.y.push_back(pt.simulated);
      theory.x.push_back(x);
      theory.y.push_back(pt.theory);
    }
    csv.close();
    art.plot(name + ".svg", {name == "steady_pin" ? "Output power vs pump power" : "Output power vs R_M2",
                             name == "steady_pin" ? "P_in (W)" : "R_M2", "P_out (W)", {theory, sim}, false});
  };
  std::vector<Cell> pin;
  for (double p : sw.steady_P_in) pin.push_back({p, cfg.loss.R_M2});
  std::vector<Cell> rm2;
  for (double r : sw.steady_R_M2) rm2.push_back({cfg.P_in, r});
  table("steady_pin", pin);
  table("steady_rm2", rm2);
  art.say("max relative deviation (lasing points): " + fmt(worst));
  art.check("steady-state agreement within 2%", worst <= 0.02, "max |rel| = " + fmt(worst));
  art.check("below-threshold points stay dark", dark_ok, "limit 2% of " + fmt(reference) + " W");
}

void relaxation(const RunConfig& cfg, Artifacts& art, bool by_pump) {
  const auto& sw = cfg.sweep;
  std::vector<Cell> cells;
  if (by_pump) {
    for (double p : sw.relax_P_in) cells.push_back({p, cfg.loss.R_M2});
  } else {
    for (double r : sw.relax_R_M2) cells.push_back({cfg.P_in, r});
  }
  const auto points = run_cells(cfg, cells, sw.relax_duration);
  const std::string stem = by_pump ? "relaxation_pin" : "relaxation_rm2";

  constexpr std::size_t stride = 100;  // 100 ns rows
  std::vector<std::string> header{"time_s"};
  for (const auto& c : cells) header.push_back(by_pump ? "P_out_" + fmt(c.P_in) + "W" : "P_out_R" + fmt(c.R_M2));
  CsvWriter csv(art.path(stem + ".csv"), header);
  const Waveform& first = points.at(cells.front()).trace;
  for (std::size_t k = 0; k < first.size(); k += stride) {
    std::vector<double> row{first.time_at(k)};
    for (const auto& c : cells) row.push_back(points.at(c).trace.samples.at(k));
    csv.row(row);
  }
  csv.close();

  CsvWriter metrics(art.path(stem + "_metrics.csv"), {"P_in_W", "R_M2", "peak_W", "peak_time_s", "steady_W",
                                                     "peak_to_steady", "frequency_Hz", "settle_time_s", "lasing"});
  Plot plot{by_pump ? "Start-up transient vs pump power" : "Start-up transient vs R_M2", "t (s)", "P_out (W)", {}, false};
  std::vector<double> peaks, freqs, ratios;
  for (const auto& c : cells) {
    const auto& pt = points.at(c);
    const auto& m = pt.relaxation;
    metrics.row(std::vector<double>{c.P_in, c.R_M2, m.peak, m.peak_time, m.steady, m.peak_to_steady, m.frequency_hz,
                                    m.settle_time, m.lasing ? 1.0 : 0.0});
    peaks.push_back(m.lasing ? m.peak : 0.0);
    freqs.push_back(m.frequency_hz);
    ratios.push_back(m.peak_to_steady);
    plot.series.push_back({header[plot.series.size() + 1], times_of(pt.trace), pt.trace.samples, false});
  }
  metrics.close();
  art.plot(stem + ".svg", plot);

  if (by_pump) {
    art.say("peaks (W): " + list(peaks));
    art.say("frequencies (Hz): " + list(freqs));
    art.check("peak height increases with P_in", strictly_increasing(peaks), list(peaks));
    art.check("oscillation frequency increases with P_in", strictly_increasing(freqs), list(freqs));
  } else {
    art.say("peak-to-steady ratios: " + list(ratios));
    art.check("oscillation severity increases with R_M2", strictly_increasing(ratios), list(ratios));
  }
  const auto def = points.find({cfg.P_in, cfg.loss.R_M2});
  if (def != points.end()) {
    const auto& m = def->second.relaxation;
    art.check("default frequency 50 kHz +-20%", std::abs(m.frequency_hz - 50e3) <= 10e3, fmt(m.frequency_hz) + " Hz");
    art.check("settles within 0.5 ms", m.lasing && m.settle_time <= 0.5e-3, fmt(m.settle_time) + " s");
  }
}

void intrusion(const RunConfig& cfg, Artifacts& art) {
  const CavityConfig cavity = cfg.cavity();
  const CavitySimulator warm = warm_start(cavity, cfg.P_in, cfg.sweep.warmup);
  const IntrusionResult r = intrusion_experiment(cfg, warm);

  CsvWriter csv(art.path("intrusion.csv"), {"time_s", "P_out_W", "gamma_obj"});
  for (std::size_t k = 0; k < r.power.size(); k += 10) {
    csv.row(std::vector<double>{r.power.time_at(k), r.power.samples[k], r.obstruction.samples[k]});
  }
  csv.close();
  CsvWriter pulse(art.path("intrusion_pulse.csv"), {"time_s", "P_out_W"});
  Series zoom{"P_out", {}, {}, false};
  for (std::size_t k = 0; k < r.power.size(); ++k) {
    const double t = r.power.time_at(k);
    if (std::abs(t - r.pulse_time) <= 3e-6) {
      pulse.row(std::vector<double>{t, r.power.samples[k]});
      zoom.x.push_back(t);
      zoom.y.push_back(r.power.samples[k]);
    }
  }
  pulse.close();
  CsvWriter m(art.path("intrusion_metrics.csv"), {"t_start_s", "t_reopen_s", "steady_before_W", "blocked_max_W",
                                                  "pulse_peak_W", "pulse_time_s", "pulse_fwhm_s", "pulses", "later_peaks"});
  m.row(std::vector<double>{r.t_start, r.t_reopen, r.steady_before, r.blocked_max, r.pulse_peak, r.pulse_time,
                            r.pulse_fwhm, static_cast<double>(r.pulses), static_cast<double>(r.later_peaks)});
  m.close();
  art.plot("intrusion.svg", {"Intrusion and reopening", "t (s)", "P_out (W)",
                             {{"P_out", times_of(r.power), r.power.samples, false}}, false});
  art.plot("intrusion_pulse.svg", {"Reopening pulse", "t (s)", "P_out (W)", {zoom}, false});

  art.say("pulse peak " + fmt(r.pulse_peak) + " W, FWHM " + fmt(r.pulse_fwhm) + " s");
  art.check("resonance extinguished while blocked", r.blocked_max <= 0.01 * r.steady_before,
            "max " + fmt(r.blocked_max) + " W");
  art.check("single pulse after reopening", r.pulses == 1, std::to_string(r.pulses) + " maxima above half peak");
  art.check("pulse peak 1493 W +-25%", std::abs(r.pulse_peak - 1493.0) <= 0.25 * 1493.0, fmt(r.pulse_peak) + " W");
  art.check("pulse narrower than 1 us", r.pulse_fwhm < 1e-6, fmt(r.pulse_fwhm) + " s");
  art.check("relaxation follows the pulse", r.later_peaks >= 2, std::to_string(r.later_peaks) + " later maxima");
}

void modulation_response(const RunConfig& cfg, Artifacts& art) {
  const CavityConfig cavity = cfg.cavity();
  CavitySimulator sim = warm_start(cavity, cfg.P_in, cfg.sweep.warmup);
  const double t0 = sim.time();
  const double t_stop = t0 + cfg.sweep.modulation_on;
  Scenario s;
  s.duration = t_stop + cfg.sweep.modulation_after;
  s.pump = {{0.0, s.duration, cfg.P_in}};
  s.modulation.bit_rate = cfg.bit_rate;
  s.modulation.bias = cfg.bias;
  s.modulation.bits = random_bitstream(static_cast<std::size_t>(std::ceil(cfg.sweep.modulation_on * cfg.bit_rate)),
                                       mix_seed(cfg.seed, 2));
  s.modulation_windows = {{t0, t_stop}};
  s.channels = {Channel::OutputPower, Channel::Modulator};
  s.decimation = kTraceDecimation;
  const RunRecord rec = run(s, sim);
  const Waveform& p = rec.main.at(Channel::OutputPower);
  const Waveform& m = rec.main.at(Channel::Modulator);

  CsvWriter csv(art.path("modulation_response.csv"), {"time_s", "P_out_W", "s"});
  double before = 0.0;
  double after_peak = 0.0;
  double level_on = 0.0;
  std::size_t on_count = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double t = p.time_at(k);
    csv.row(std::vector<double>{t, p.samples[k], m.samples[k]});
    if (k == 0) before = p.samples[k];
    if (t > t_stop - 20e-6 && t < t_stop) {
      level_on += p.samples[k];
      ++on_count;
    }
    if (t >= t_stop && t < t_stop + 20e-6) after_peak = std::max(after_peak, p.samples[k]);
  }
  csv.close();
  if (on_count) level_on /= static_cast<double>(on_count);
  art.plot("modulation_response.svg", {"Output power with modulation on/off", "t (s)", "P_out (W)",
                                       {{"P_out", times_of(p), p.samples, false}}, false});
  art.say("P_out before " + fmt(before) + " W, mean late in window " + fmt(level_on) + " W, peak after stop " +
          fmt(after_peak) + " W");
  art.check("pulse on modulation stop", after_peak > level_on, fmt(after_peak) + " W vs " + fmt(level_on) + " W");
}

void gain_spectrum(const RunConfig& cfg, Artifacts& art) {
  const CavityConfig cavity = cfg.cavity();
  const CavitySimulator warm = warm_start(cavity, cfg.P_in, cfg.sweep.warmup);
  const GainSpectrumResult g = gain_spectrum_experiment(cfg, warm);

  CsvWriter csv(art.path("gain_spectrum.csv"), {"frequency_Hz", "magnitude"});
  Series sp{"|G(f)|", {}, {}, false};
  for (std::size_t k = 0; k < g.spectrum.frequency_hz.size() && g.spectrum.frequency_hz[k] <= 20e6; ++k) {
    csv.row(std::vector<double>{g.spectrum.frequency_hz[k], g.spectrum.magnitude[k]});
    if (k > 0 && g.spectrum.frequency_hz[k] <= 2e6) {
      sp.x.push_back(g.spectrum.frequency_hz[k]);
      sp.y.push_back(g.spectrum.magnitude[k]);
    }
  }
  csv.close();
  CsvWriter trace(art.path("gain_trace.csv"), {"time_s", "G"});
  for (std::size_t k = 0; k < g.gain.gain.size(); k += 10) {
    trace.row(std::vector<double>{g.gain.gain.time_at(k), g.gain.gain.samples[k]});
  }
  trace.close();
  art.plot("gain_spectrum.svg", {"Gain fluctuation spectrum (non-DC)", "f (Hz)", "|G(f)|", {sp}, true});
  art.plot("gain_trace.svg", {"Single-pass gain under modulation", "t (s)", "G",
                              {{"G", times_of(g.gain.gain), g.gain.gain.samples, false}}, false});
  art.say("non-DC energy below " + fmt(g.cutoff_hz) + " Hz: " + fmt(g.low_band_fraction, 8));
  art.check("99% of gain fluctuation below 250 kHz", g.low_band_fraction >= 0.99, fmt(g.low_band_fraction, 8));
}

void demodulation(const RunConfig& cfg, Artifacts& art) {
  const CavityConfig cavity = cfg.cavity();
  const CavitySimulator warm = warm_start(cavity, cfg.P_in, cfg.sweep.warmup);
  const Bitstream tx = random_bitstream(cfg.sweep.demo_bits, mix_seed(cfg.seed, 3));
  const Capture cap = modulated_capture(cfg, warm, tx);
  const DemodResult d = demodulate(cap.p_out, cfg.demod, cap.timing, cap.tx, round_trip_hint(cfg.demod, cavity),
                                   mix_seed(cfg.seed, 4));

  CsvWriter csv(art.path("demodulation.csv"), {"time_s", "s", "P_out_W", "V_held", "y"});
  for (std::size_t k = 0; k < cap.p_out.size(); k += 10) {
    csv.row(std::vector<double>{cap.p_out.time_at(k), cap.control.samples[k], cap.p_out.samples[k], d.held.samples[k],
                                d.receiver.y.samples[k]});
  }
  csv.close();
  CsvWriter bits(art.path("demodulation_bits.csv"), {"bit", "tx", "rx"});
  const auto& rx = d.receiver.decisions.bits;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    bits.row(std::vector<double>{static_cast<double>(k), static_cast<double>(tx[k]), static_cast<double>(rx[k])});
  }
  bits.close();

  const std::size_t show = std::min<std::size_t>(cap.p_out.size(), cap.timing.modulation_start + 40 * 300 + 8000);
  const std::size_t from = cap.timing.modulation_start;
  std::vector<double> t, s, y;
  for (std::size_t k = from; k < show; ++k) {
    t.push_back(cap.p_out.time_at(k));
    s.push_back(cap.control.samples[k]);
    y.push_back(d.receiver.y.samples[k]);
  }
  art.plot("demodulation.svg", {"Control signal and delay-divide output", "t (s)", "", {{"s", t, s, false}, {"y", t, y, false}}, false});
  art.say("round trip " + std::to_string(d.report.n_c) + " steps, phase " + std::to_string(d.report.phase) + ", " +
          std::to_string(d.report.errors) + " errors in " + std::to_string(d.report.bits_compared) + " bits");
  art.check("error-free recovery", d.report.errors == 0 && d.report.bits_compared == tx.size(),
            std::to_string(d.report.errors) + " errors / " + std::to_string(d.report.bits_compared) + " bits");
}

void ber_sweep(const RunConfig& cfg, Artifacts& art) {
  const CavityConfig cavity = cfg.cavity();
  const CavitySimulator warm = warm_start(cavity, cfg.P_in, cfg.sweep.warmup);
  const Bitstream tx = random_bitstream(cfg.sweep.ber_bit_count, mix_seed(cfg.seed, 5));
  const Capture cap = modulated_capture(cfg, warm, tx);
  const auto cells = ber_grid(cfg, cap);

  CsvWriter csv(art.path("ber.csv"), {"sample_rate_Hz", "adc_bits", "noise_var", "bits_compared", "errors", "ber",
                                      "phase", "n_c", "seed"});
  std::map<std::pair<double, int>, Series> curves;
  for (const auto& c : cells) {
    csv.row(std::vector<std::string>{format_double(c.sample_rate_hz), std::to_string(c.adc_bits),
                                     format_double(c.noise_variance), std::to_string(c.report.bits_compared),
                                     std::to_string(c.report.errors), format_double(c.report.ber),
                                     std::to_string(c.report.phase), std::to_string(c.report.n_c),
                                     std::to_string(c.report.seed)});
    auto& s = curves[{c.noise_variance, c.adc_bits}];
    s.label = std::to_string(c.adc_bits) + " bit, var " + fmt(c.noise_variance);
    s.markers = true;
    s.x.push_back(c.sample_rate_hz);
    s.y.push_back(std::max(c.report.ber, 1.0 / static_cast<double>(std::max<std::size_t>(1, c.report.bits_compared))));
  }
  csv.close();
  Plot plot{"BER vs ADC sample rate (zero-error cells drawn at 1/N)", "sample rate (Hz)", "BER", {}, true};
  for (auto& [key, s] : curves) plot.series.push_back(s);
  art.plot("ber.svg", plot);

  constexpr double fec = 3.8e-3;
  const auto find = [&](double rate, int bits, double noise) -> const BerCell* {
    for (const auto& c : cells) {
      if (c.sample_rate_hz == rate && c.adc_bits == bits && c.noise_variance == noise) return &c;
    }
    return nullptr;
  };
  bool clean_ok = true;
  bool noisy_ok = false;
  bool bits_order = true;
  bool rate_order = true;
  const int best_bits = cfg.sweep.ber_adc_bits.empty() ? 10 : *std::max_element(cfg.sweep.ber_adc_bits.begin(),
                                                                               cfg.sweep.ber_adc_bits.end());
  // Sampling the LPF1 output without aliasing needs twice its stopband edge.
  const double sufficient = std::max(2.0 * cfg.bit_rate, 2.0 * cfg.demod.lpf1.stopband_hz);
  for (double noise : cfg.sweep.ber_noise) {
    bool all_below = true;
    bool any_rate = false;
    for (double rate : cfg.sweep.ber_rates) {
      if (rate < sufficient) continue;
      if (const auto* c = find(rate, best_bits, noise)) {
        any_rate = true;
        all_below = all_below && c->report.ber < fec;
      }
    }
    if (noise == 0.0) clean_ok = clean_ok && any_rate && all_below;
    if (noise > 0.0 && any_rate && all_below) noisy_ok = true;
    for (double rate : cfg.sweep.ber_rates) {
      for (int lo : cfg.sweep.ber_adc_bits) {
        for (int hi : cfg.sweep.ber_adc_bits) {
          const auto* a = find(rate, lo, noise);
          const auto* b = find(rate, hi, noise);
          if (hi > lo && a && b && b->report.ber > a->report.ber) bits_order = false;
        }
      }
    }
    for (int bits : cfg.sweep.ber_adc_bits) {
      std::vector<double> rates(cfg.sweep.ber_rates);
      std::sort(rates.begin(), rates.end());
      for (std::size_t i = 1; i < rates.size(); ++i) {
        const auto* a = find(rates[i - 1], bits, noise);
        const auto* b = find(rates[i], bits, noise);
        if (a && b && b->report.ber > a->report.ber) rate_order = false;
      }
    }
  }
  const std::string where = std::to_string(best_bits) + " bit ADC, rates >= " + fmt(sufficient) + " Hz";
  art.check("BER below 3.8e-3 at sufficient sample rate, noiseless", clean_ok, where);
  art.check("BER below 3.8e-3 at sufficient sample rate, one noisy case", noisy_ok, where);
  art.check("more ADC bits never worse", bits_order, "point for point");
  art.check("BER non-increasing in sample rate", rate_order, "per (bits, noise) curve");
}

void write_manifest(const RunConfig& cfg, PresetId id, Artifacts& art) {
  std::ofstream out(art.path("manifest.cfg"));
  if (!out) throw std::runtime_error("cannot write manifest");
  out << "# preset " << preset_name(id) << "\n" << to_config_text(cfg);
}

}  // namespace

std::string preset_name(PresetId id) {
  for (const auto& [k, name] : kNames) {
    if (k == id) return name;
  }
  return "unknown";
}

std::optional<PresetId> parse_preset(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

std::vector<PresetId> all_presets() {
  std::vector<PresetId> ids;
  for (const auto& [k, n] : kNames) ids.push_back(k);
  return ids;
}

bool PresetReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

PresetReport run_preset(PresetId id, const RunConfig& cfg, const std::filesystem::path& out) {
  if (auto issues = cfg.validate(); !issues.empty()) throw ConfigError(std::move(issues));
  PresetReport report;
  Artifacts art(out, report);
  write_manifest(cfg, id, art);
  switch (id) {
    case PresetId::SteadySweep: steady_sweep(cfg, art); break;
    case PresetId::RelaxationPin: relaxation(cfg, art, true); break;
    case PresetId::RelaxationRm2: relaxation(cfg, art, false); break;
    case PresetId::Intrusion: intrusion(cfg, art); break;
    case PresetId::ModulationResponse: modulation_response(cfg, art); break;
    case PresetId::GainSpectrum: gain_spectrum(cfg, art); break;
    case PresetId::Demodulation: demodulation(cfg, art); break;
    case PresetId::BerSweep: ber_sweep(cfg, art); break;
  }
  return report;
}

}  // namespace resobeam
