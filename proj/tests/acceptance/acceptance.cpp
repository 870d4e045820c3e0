// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "resobeam/cavity_sim.hpp"
#include "resobeam/config.hpp"
#include "resobeam/experiments.hpp"
#include "resobeam/fir.hpp"
#include "resobeam/gain_dynamics.hpp"
#include "resobeam/geometry.hpp"
#include "resobeam/modem.hpp"
#include "resobeam/steady_state.hpp"

using namespace resobeam;

namespace {

struct Line {
  bool pass;
  std::string text;
};

std::vector<Line> g_lines;

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  const auto text = fmt("%s  criterion %d  %s: %s", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::printf("%s\n", text.c_str());
  std::fflush(stdout);
  g_lines.push_back({pass, text});
}

void note(const std::string& s) {
  std::printf("      %s\n", s.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_rate(double hz) { return fmt("%.1f GS/s", hz * 1e-9); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// --- 2: operating-point numbers through the discrete slice update ---------
void worked_numbers() {
  GainMediumParams p;
  p.a_g = 1e-3;
  p.n_slices = 1;
  p.eta_c = 0.439;
  const double phi = 5.679339e16;
  const double R_p = pump_rate(20.0, p);
  const auto adv = [&](double n2, double f) { return slice_step(n2, f, 0.0, R_p, p).N2_next; };
  const double b = adv(0.0, phi);
  const double a = (adv(1e24, phi) - b) / 1e24;
  const double fixed = b / (1.0 - a);
  const double dt = p.time_step();
  const double slope = (adv(fixed, phi * 1.001) - adv(fixed, phi)) / (1e-3 * phi * dt);
  double n2 = fixed;
  for (long i = 0, n = std::lround(20e-9 / dt); i < n; ++i) n2 = adv(n2, 0.9 * phi);
  const double dn2 = n2 - fixed;
  const double e1 = rel(fixed, 1.181963e24), e2 = rel(slope, -5.531587e10), e3 = rel(dn2, 6.283152e18);
  report(2, "operating-point numbers", e1 <= 1e-3 && e2 <= 1e-3 && e3 <= 5e-3,
         fmt("N2 %.6e (err %.3f%%, tol 0.1%%), slope %.6e (err %.3f%%, tol 0.1%%), dN2(20 ns) %.6e (err %.3f%%, tol 0.5%%)",
             fixed, 100 * e1, slope, 100 * e2, dn2, 100 * e3));
}

// --- 1 and 3: dark start-ups --------------------------------------------
void startups(const RunConfig& base) {
  std::map<std::pair<double, double>, SteadyPoint> runs;
  std::vector<std::pair<double, double>> grid;
  for (double P : base.sweep.steady_P_in) grid.emplace_back(P, 0.9);
  for (double R : base.sweep.steady_R_M2) grid.emplace_back(60.0, R);
  for (double P : base.sweep.relax_P_in) grid.emplace_back(P, 0.9);
  for (double R : base.sweep.relax_R_M2) grid.emplace_back(60.0, R);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SteadyPoint> points(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    points[i] = steady_point(base, grid[i].first, grid[i].second, base.sweep.steady_duration);
  });
  for (std::size_t i = 0; i < grid.size(); ++i) runs[grid[i]] = std::move(points[i]);
  note(fmt("%zu start-up runs of %.3g ms in %.0f s", grid.size(), base.sweep.steady_duration * 1e3, seconds_since(t0)));

  // 1
  const double default_out = output_power(base.P_in, base.loss, base.pump_chain, base.medium.a_g, base.medium.I_s).watts;
  bool ok1 = true;
  double worst = 0.0;
  auto judge = [&](const SteadyPoint& pt) {
    std::string line;
    if (pt.below_threshold) {
      const bool dark = pt.simulated <= 0.02 * default_out;
      ok1 = ok1 && dark;
      line = fmt("P_in %4.0f W R_M2 %.3f: below threshold, simulated %.3g W (%s)", pt.P_in, pt.R_M2, pt.simulated,
                 dark ? "dark" : "NOT dark");
    } else {
      const double e = rel(pt.simulated, pt.theory);
      worst = std::max(worst, e);
      ok1 = ok1 && e <= 0.02;
      line = fmt("P_in %4.0f W R_M2 %.3f: simulated %.4f W, closed form %.4f W, err %+.3f%%", pt.P_in, pt.R_M2,
                 pt.simulated, pt.theory, 100 * (pt.simulated - pt.theory) / pt.theory);
    }
    note(line);
  };
  for (double P : base.sweep.steady_P_in) judge(runs.at({P, 0.9}));
  for (double R : base.sweep.steady_R_M2) {
    if (R != 0.9) judge(runs.at({60.0, R}));
  }
  report(1, "steady state vs closed form", ok1, fmt("worst lasing error %.3f%% (tol 2%%); below-threshold points dark", 100 * worst));

  // 3
  const auto& def = runs.at({60.0, 0.9}).relaxation;
  const bool settles = def.lasing && def.settle_time <= 0.5e-3;
  const bool freq_ok = rel(def.frequency_hz, 50e3) <= 0.2;
  note(fmt("default start-up: peak %.2f W at %.1f us, %.2f kHz, settles (5%%) at %.1f us, %zu cycles", def.peak,
           def.peak_time * 1e6, def.frequency_hz * 1e-3, def.settle_time * 1e6, def.cycles));
  bool mono = true;
  double prev_peak = -1.0, prev_freq = -1.0;
  for (double P : base.sweep.relax_P_in) {
    const auto& m = runs.at({P, 0.9}).relaxation;
    const double peak = m.lasing ? m.peak : 0.0;
    const double freq = m.lasing ? m.frequency_hz : 0.0;
    note(fmt("P_in %4.0f W: peak %.3f W, frequency %.2f kHz%s", P, peak, freq * 1e-3, m.lasing ? "" : " (dark)"));
    mono = mono && peak > prev_peak && freq > prev_freq;
    prev_peak = peak;
    prev_freq = freq;
  }
  bool severity = true;
  double prev_ratio = -1.0;
  for (double R : base.sweep.relax_R_M2) {
    const auto& m = runs.at({60.0, R}).relaxation;
    note(fmt("R_M2 %.3f: peak/steady %.3f", R, m.peak_to_steady));
    severity = severity && m.lasing && m.peak_to_steady > prev_ratio;
    prev_ratio = m.peak_to_steady;
  }
  report(3, "relaxation oscillation", settles && freq_ok && mono && severity,
         fmt("settle %.1f us (<= 500), frequency %.2f kHz (50 +-20%%), monotone in P_in %s, ratio ordering in R_M2 %s",
             def.settle_time * 1e6, def.frequency_hz * 1e-3, mono ? "yes" : "no", severity ? "yes" : "no"));
}

// --- 4 ------------------------------------------------------------------
void intrusion(const RunConfig& base, const CavitySimulator& warm) {
  const auto r = intrusion_experiment(base, warm);
  note(fmt("steady %.3f W, max while blocked %.3g W, pulse %.1f W at +%.2f us after reopen, FWHM %.3f us, %zu pulse(s), %zu later relaxation peaks",
           r.steady_before, r.blocked_max, r.pulse_peak, (r.pulse_time - r.t_reopen) * 1e6, r.pulse_fwhm * 1e6,
           r.pulses, r.later_peaks));
  const bool extinguished = r.blocked_max <= 1e-3 * r.steady_before;
  const bool height = rel(r.pulse_peak, 1493.0) <= 0.25;
  const bool narrow = r.pulse_fwhm < 1e-6;
  const bool single = r.pulses == 1;
  const bool relaxes = r.later_peaks >= 1;
  report(4, "intrusion pulse", extinguished && height && narrow && single && relaxes,
         fmt("extinguished %s, peak %.1f W (1493 +-25%%), FWHM %.3f us (< 1), single %s, relaxation after %s",
             extinguished ? "yes" : "no", r.pulse_peak, r.pulse_fwhm * 1e6, single ? "yes" : "no", relaxes ? "yes" : "no"));
}

// --- 5 ------------------------------------------------------------------
void gain_spectrum(const RunConfig& base, const CavitySimulator& warm) {
  const auto g = gain_spectrum_experiment(base, warm);
  report(5, "gain spectrum below 250 kHz", g.low_band_fraction >= 0.99,
         fmt("%.4f of non-DC energy below %.0f kHz (need >= 0.99), %zu samples", g.low_band_fraction, g.cutoff_hz * 1e-3,
             g.gain.gain.size()));
}

// --- 6 ------------------------------------------------------------------
void demodulation(const RunConfig& base, const CavitySimulator& warm) {
  const Bitstream tx = random_bitstream(1000, mix_seed(base.seed, 3));
  const auto cap = modulated_capture(base, warm, tx);
  DemodConfig cfg = base.demod;
  cfg.noise_variance = 0.0;
  const auto r = demodulate(cap.p_out, cfg, cap.timing, tx, cap.round_trip_steps, 0);
  report(6, "noiseless demodulation", r.report.errors == 0 && r.report.bits_compared == tx.size(),
         fmt("%zu errors in %zu bits, delay %ld (n_c %ld), phase %zu", r.report.errors, r.report.bits_compared,
             r.search.best, cap.round_trip_steps, r.report.phase));
}

// --- 7 ------------------------------------------------------------------
void ber_sweep(const RunConfig& base, const CavitySimulator& warm) {
  const Bitstream tx = random_bitstream(base.sweep.ber_bit_count, mix_seed(base.seed, 5));
  const auto cap = modulated_capture(base, warm, tx);
  const auto t0 = std::chrono::steady_clock::now();
  const auto cells = ber_grid(base, cap);
  note(fmt("%zu cells over %zu bits in %.0f s", cells.size(), tx.size(), seconds_since(t0)));

  std::map<std::tuple<double, int, double>, double> ber;
  for (const auto& c : cells) {
    ber[{c.noise_variance, c.adc_bits, c.sample_rate_hz}] = c.report.ber;
    note(fmt("noise %.2e V^2  %2d bit  %5.1f GS/s  BER %.3e (%zu errors)", c.noise_variance, c.adc_bits,
             c.sample_rate_hz * 1e-9, c.report.ber, c.report.errors));
  }
  // Rates at or above twice the anti-alias stopband edge sample the filtered
  // signal without aliasing.
  const double nyquist_rate = 2.0 * base.demod.lpf1.stopband_hz;
  const double symbol_rate = base.bit_rate;
  bool fec = true, bits_order = true, rate_order = true, nonzero_noise = false, any_sufficient = false;
  std::string below;
  for (double noise : base.sweep.ber_noise) {
    nonzero_noise = nonzero_noise || noise > 0.0;
    for (int bits : base.sweep.ber_adc_bits) {
      double prev = 2.0;
      for (double rate : base.sweep.ber_rates) {
        const double b = ber.at({noise, bits, rate});
        rate_order = rate_order && b <= prev;
        prev = b;
        if (bits == 10 && rate >= nyquist_rate) {
          fec = fec && b < 3.8e-3;
          any_sufficient = true;
        } else if (bits == 10 && rate >= 2 * symbol_rate) {
          below += fmt(" %.1f GS/s noise %.0e: %.3g;", rate * 1e-9, noise, b);
        }
        if (bits == 10 && ber.count({noise, 8, rate})) bits_order = bits_order && b <= ber.at({noise, 8, rate});
      }
    }
  }
  if (!below.empty()) note("10-bit cells at >= 2x symbol rate but below " + format_rate(nyquist_rate) + ":" + below);
  report(7, "BER sweep", fec && any_sufficient && bits_order && rate_order && nonzero_noise,
         fmt("10-bit BER < 3.8e-3 at every rate >= %.1f GS/s %s, 10 bit <= 8 bit %s, non-increasing in rate %s, nonzero noise swept %s",
             nyquist_rate * 1e-9, fec && any_sufficient ? "yes" : "no", bits_order ? "yes" : "no",
             rate_order ? "yes" : "no", nonzero_noise ? "yes" : "no"));
}

// --- 8 ------------------------------------------------------------------
void properties(const RunConfig& base, const CavitySimulator& warm) {
  std::vector<std::string> failed;
  std::mt19937_64 rng(base.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // delay line
  for (std::size_t len : {1u, 30u, 3090u}) {
    DelayLine line(len);
    std::deque<double> ref(len, 0.0);
    for (int i = 0; i < 20000; ++i) {
      const double x = u(rng);
      ref.push_back(x);
      if (line.push(x) != ref.front()) {
        failed.push_back("delay line");
        break;
      }
      ref.pop_front();
    }
  }

  // ray matrices and mode size
  for (int i = 0; i < 200; ++i) {
    const double f = 0.01 + 0.1 * u(rng);
    const auto g = CavityGeometry::symmetric(f, f * (1.0 + 0.02 * (u(rng) - 0.5)), 0.5 + 3.0 * u(rng), 2e-3, 1064e-9);
    const auto m = ray_matrix(g) * free_space(0.3 * u(rng)) * thin_lens(0.2 * (u(rng) - 0.5));
    if (std::abs(m.determinant() - 1.0) > 1e-9) {
      failed.push_back("unimodular ray matrix");
      break;
    }
  }
  {
    const auto g = base.resolved_geometry();
    if (rel(beam_radius(g, g.z_g), g.a_g) > 1e-9) failed.push_back("beam_radius(z_g) = a_g");
  }

  // quantizer
  {
    DemodConfig cfg;
    Waveform w;
    w.dt = cfg.adc_interval;
    for (int i = 0; i < 20000; ++i) w.samples.push_back(2.5 * u(rng));
    for (int bits : {8, 10}) {
      cfg.adc_bits = bits;
      const auto out = adc(w, cfg);
      const double lsb = cfg.adc_full_scale / std::ldexp(1.0, bits);
      for (std::size_t k = 0; k < w.size(); ++k) {
        const double e = w.samples[k] - out.levels.samples[k];
        if (e < 0.0 || e >= lsb) {
          failed.push_back("quantizer bound");
          break;
        }
      }
    }
  }

  // filter linearity
  {
    const auto f = FirFilter::design_lowpass(base.demod.lpf1, 3e11);
    std::vector<double> a(5000), b(5000), s(5000);
    for (int i = 0; i < 5000; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      s[i] = 0.7 * a[i] - 1.3 * b[i];
    }
    const auto fa = f.apply(a), fb = f.apply(b), fs = f.apply(s);
    for (int i = 0; i < 5000; ++i) {
      if (std::abs(fs[i] - (0.7 * fa[i] - 1.3 * fb[i])) > 1e-12) {
        failed.push_back("filter linearity");
        break;
      }
    }
  }

  // round-trip balance at steady state
  double balance = 0.0;
  {
    CavitySimulator sim = warm;
    Scenario s;
    s.duration = sim.time() + 20 * sim.config().round_trip_steps() * sim.config().dt();
    s.pump = {{0.0, s.duration, sim.pump()}};
    s.channels = {Channel::GainInput, Channel::GainOutput};
    s.decimation = 1;
    const auto rec = run(s, sim);
    const auto g = gain_monitor(rec.main);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < g.gain.size(); ++k) {
      if (g.valid[k]) {
        sum += g.gain.samples[k];
        ++n;
      }
    }
    const double G = sum / static_cast<double>(n);
    balance = G * G * sim.config().loss.static_loss();
    note(fmt("single-pass gain %.6f, static round-trip loss %.6f, G^2 * loss = %.6f", G, sim.config().loss.static_loss(),
             balance));
    if (std::abs(balance - 1.0) > 5e-3) failed.push_back("round-trip balance");
  }

  // determinism from a manifest
  {
    RunConfig cfg = base;
    cfg.duration = 20e-6;
    cfg.modulation_windows = {{5e-6, 15e-6}};
    cfg.bits = "random:64";
    cfg.decimation = 10;
    const auto text = to_config_text(cfg);
    const auto once = [&] {
      const auto c = parse_config(text, "manifest");
      auto sc = c.scenario();
      return run(sc, c.cavity()).main.at(Channel::OutputPower).samples;
    };
    const auto a = once();
    const auto b = once();
    if (a != b || a.empty()) failed.push_back("determinism from manifest");
  }

  std::string detail = failed.empty() ? "all properties hold" : "failed:";
  for (const auto& f : failed) detail += " [" + f + "]";
  detail += fmt(" (G^2 * loss = %.5f)", balance);
  report(8, "property suites", failed.empty(), detail);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig base;
  try {
    if (argc > 1) base = load_config(argv[1]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }
  const auto start = std::chrono::steady_clock::now();

  const auto guarded = [](int id, const char* title, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      report(id, title, false, std::string("exception: ") + e.what());
    }
  };

  guarded(2, "operating-point numbers", [] { worked_numbers(); });
  guarded(1, "steady state and relaxation", [&] { startups(base); });

  CavitySimulator warm(base.cavity());
  guarded(0, "warm-up", [&] {
    warm = warm_start(base.cavity(), base.P_in, base.sweep.warmup);
    note(fmt("warm-up to %.3g ms at %.0f W done", warm.time() * 1e3, base.P_in));
  });
  guarded(4, "intrusion pulse", [&] { intrusion(base, warm); });
  guarded(5, "gain spectrum below 250 kHz", [&] { gain_spectrum(base, warm); });
  guarded(6, "noiseless demodulation", [&] { demodulation(base, warm); });
  guarded(7, "BER sweep", [&] { ber_sweep(base, warm); });
  guarded(8, "property suites", [&] { properties(base, warm); });

  std::sort(g_lines.begin(), g_lines.end(), [](const Line& a, const Line& b) {
    return a.text.substr(16) < b.text.substr(16);
  });
  std::printf("\nsummary (%.0f s)\n", seconds_since(start));
  int failures = 0;
  for (const auto& l : g_lines) {
    std::printf("%s\n", l.text.c_str());
    failures += l.pass ? 0 : 1;
  }
  return failures;
}
