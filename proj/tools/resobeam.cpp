// Command-line front end: geometry, steady-state, simulate, demodulate,
// ber-sweep and preset subcommands over one shared config.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "resobeam/cavity_sim.hpp"
#include "resobeam/config.hpp"
#include "resobeam/csv.hpp"
#include "resobeam/errors.hpp"
#include "resobeam/experiments.hpp"
#include "resobeam/geometry.hpp"
#include "resobeam/modem.hpp"
#include "resobeam/presets.hpp"
#include "resobeam/steady_state.hpp"
#include "resobeam/svg_plot.hpp"
#include "resobeam/trace_io.hpp"

namespace fs = std::filesystem;
using namespace resobeam;

namespace {

enum Exit : int { kOk = 0, kConfig = 2, kFault = 3, kCheck = 4 };

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;

  RunConfig load() const {
    RunConfig cfg = config.empty() ? RunConfig{} : load_config(config);
    std::vector<std::string> all(sets);
    if (out) all.push_back("run.out=" + *out);
    if (seed) all.push_back("run.seed=" + std::to_string(*seed));
    apply_overrides(cfg, all);
    return cfg;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Config file (sectioned key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.sets, "Override, section.key=value (repeatable)")->take_all();
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--seed", c.seed, "Global seed");
}

void write_manifest(const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.cfg");
  out << to_config_text(cfg);
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.cfg").string());
}

int cmd_geometry(const RunConfig& cfg, bool write) {
  const CavityGeometry g = cfg.resolved_geometry();
  const RayMatrix m = ray_matrix(g);
  const Stability st = is_stable(g);
  std::printf("ray matrix  A=%.9g B=%.9g m C=%.9g 1/m D=%.9g (det %.12g)\n", m.A, m.B, m.C, m.D, m.determinant());
  std::printf("g1*g2 = %.9g  %s\n", st.margin, st.stable ? "stable" : "unstable");
  if (!st.stable) return kConfig;
  const auto q = q_parameter(g, g.z_g);
  std::printf("q(z_g) = %.9g %+.9gj m, mode radius %.6g m, beam radius %.6g m\n", q.real(), q.imag(),
              mode_radius(g, g.z_g), beam_radius(g, g.z_g));
  const CavityConfig cavity = cfg.cavity();
  std::printf("n_L = %ld, n_R = %ld, n_c = %ld, round trip %.6g s\n", cavity.n_L, cavity.n_R,
              cavity.round_trip_steps(), static_cast<double>(cavity.round_trip_steps()) * cavity.dt());
  if (!write) return kOk;

  const fs::path dir = cfg.out_dir;
  write_manifest(cfg, dir);
  CsvWriter csv(dir / "beam_radius.csv", {"z_m", "w_m"});
  Series s{"w(z)", {}, {}, false};
  constexpr int n = 2001;
  for (int i = 0; i < n; ++i) {
    const double z = g.z_M1 + (g.z_M2 - g.z_M1) * i / (n - 1);
    const double w = beam_radius(g, z);
    csv.row(std::vector<double>{z, w});
    s.x.push_back(z);
    s.y.push_back(w);
  }
  csv.close();
  write_svg({"Resonant beam radius", "z (m)", "w (m)", {s}, false}, dir / "beam_radius.svg");
  std::printf("wrote %s\n", (dir / "beam_radius.csv").c_str());
  return kOk;
}

int cmd_steady(const RunConfig& cfg, bool write) {
  const auto& m = cfg.medium;
  const double pth = threshold_power(cfg.loss, cfg.pump_chain, m.a_g, m.I_s);
  const double slope = slope_efficiency(cfg.loss, cfg.pump_chain);
  std::printf("R1 = %.9g, R2 = %.9g, static loss = %.9g\n", cfg.loss.left_reflectivity(), cfg.loss.right_reflectivity(),
              cfg.loss.static_loss());
  std::printf("threshold %.9g W, slope efficiency %.9g\n", pth, slope);
  const auto out = output_power(cfg.P_in, cfg.loss, cfg.pump_chain, m.a_g, m.I_s);
  std::printf("P_in %.6g W -> P_out %.9g W%s\n", cfg.P_in, out.watts, out.below_threshold ? " (below threshold)" : "");
  if (!write) return kOk;
  const fs::path dir = cfg.out_dir;
  write_manifest(cfg, dir);
  CsvWriter csv(dir / "steady_state.csv", {"P_in_W", "R_M2", "P_out_W", "below_threshold"});
  for (double p : cfg.sweep.steady_P_in) {
    const auto r = output_power(p, cfg.loss, cfg.pump_chain, m.a_g, m.I_s);
    csv.row(std::vector<double>{p, cfg.loss.R_M2, r.watts, r.below_threshold ? 1.0 : 0.0});
  }
  for (double r2 : cfg.sweep.steady_R_M2) {
    LossBudget loss = cfg.loss;
    loss.R_M2 = r2;
    const auto r = output_power(cfg.P_in, loss, cfg.pump_chain, m.a_g, m.I_s);
    csv.row(std::vector<double>{cfg.P_in, r2, r.watts, r.below_threshold ? 1.0 : 0.0});
  }
  csv.close();
  std::printf("wrote %s\n", (dir / "steady_state.csv").c_str());
  return kOk;
}

int cmd_simulate(const RunConfig& cfg) {
  const CavityConfig cavity = cfg.cavity();
  const Scenario scenario = cfg.scenario();
  const RunRecord rec = run(scenario, cavity);
  const fs::path dir = cfg.out_dir;
  write_manifest(cfg, dir);
  write_trace_csv(rec.main, dir / "trace.csv");
  write_trace_binary(rec.main, dir / "trace.rbt");
  for (std::size_t i = 0; i < rec.windows.size(); ++i) {
    write_trace_csv(rec.windows[i], dir / ("window_" + std::to_string(i) + ".csv"));
    write_trace_binary(rec.windows[i], dir / ("window_" + std::to_string(i) + ".rbt"));
  }
  std::printf("%lld steps of %.6g s, %zu samples per channel -> %s\n", static_cast<long long>(rec.steps), rec.dt,
              rec.main.traces.empty() ? std::size_t{0} : rec.main.traces.front().size(), dir.c_str());
  if (const Waveform* p = rec.main.find(Channel::OutputPower); p && !p->empty()) {
    std::printf("final P_out %.9g W\n", p->samples.back());
  }
  return kOk;
}

Waveform read_power(const fs::path& path) {
  if (path.extension() == ".rbt") return read_trace_binary(path).at(Channel::OutputPower);
  const CsvTable t = read_csv(path);
  const std::size_t tc = t.column("time_s");
  const std::size_t pc = t.column("P_out");
  if (t.rows.size() < 2) throw DemodError(path.string() + ": need at least two samples");
  Waveform w;
  w.unit = "W";
  for (const auto& r : t.rows) w.samples.push_back(std::stod(r.at(pc)));
  w.t_start = std::stod(t.rows[0].at(tc));
  w.dt = std::stod(t.rows[1].at(tc)) - w.t_start;
  return w;
}

int cmd_demodulate(const RunConfig& cfg, const fs::path& trace) {
  const Waveform p = read_power(trace);
  if (cfg.modulation_windows.empty()) throw ConfigError({"modulation.windows: demodulate needs the modulation window"});
  const CavityConfig cavity = cfg.cavity();
  const Bitstream tx = cfg.bitstream();
  LinkTiming timing;
  timing.bit_rate = cfg.bit_rate;
  const double start = cfg.modulation_windows.front().t_start;
  if (start < p.t_start) throw DemodError("modulation starts before the trace");
  timing.modulation_start = static_cast<std::size_t>(std::llround((start - p.t_start) / p.dt));
  const auto spb = samples_per_bit(cfg.bit_rate, p.dt);
  const std::size_t available = (p.size() - std::min(p.size(), timing.modulation_start)) / spb;
  const std::size_t count = std::min(tx.size(), available);
  const std::span<const std::uint8_t> sent(tx.data(), count);

  const DemodResult d = demodulate(p, cfg.demod, timing, sent, round_trip_hint(cfg.demod, cavity), mix_seed(cfg.seed, 4));
  const fs::path dir = cfg.out_dir;
  write_manifest(cfg, dir);
  CsvWriter csv(dir / "ber.csv", {"sample_rate_Hz", "adc_bits", "noise_var", "bits_compared", "errors", "ber", "phase",
                                  "n_c", "seed"});
  const auto& r = d.report;
  csv.row(std::vector<std::string>{format_double(r.sample_rate_hz), std::to_string(r.adc_bits), format_double(r.noise_var),
                                   std::to_string(r.bits_compared), std::to_string(r.errors), format_double(r.ber),
                                   std::to_string(r.phase), std::to_string(r.n_c), std::to_string(r.seed)});
  csv.close();
  std::printf("n_c %ld, phase %zu, %zu errors in %zu bits, BER %.6g\n", r.n_c, r.phase, r.errors, r.bits_compared, r.ber);
  return kOk;
}

int print_report(const PresetReport& report, bool check) {
  for (const auto& line : report.summary) std::printf("%s\n", line.c_str());
  for (const auto& c : report.checks) {
    std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  }
  std::printf("%zu files written\n", report.files.size());
  return check && !report.all_passed() ? kCheck : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonant-beam charging and communication simulator"};
  app.require_subcommand(1);

  Common common;
  auto* geometry = app.add_subcommand("geometry", "Ray matrix, stability, beam radius, delays");
  auto* steady = app.add_subcommand("steady-state", "Closed-form threshold, slope efficiency and output power");
  auto* simulate = app.add_subcommand("simulate", "Run the configured scenario and write traces");
  auto* demod = app.add_subcommand("demodulate", "Demodulate the P_out channel of a recorded trace");
  auto* ber = app.add_subcommand("ber-sweep", "BER over ADC rate, resolution and noise");
  auto* preset = app.add_subcommand("preset", "Run a figure preset");
  for (auto* c : {geometry, steady, simulate, demod, ber, preset}) add_common(c, common);

  std::string trace;
  demod->add_option("--trace", trace, "Trace file (.rbt or .csv with time_s and P_out)")->required()->check(CLI::ExistingFile);

  std::string preset_id;
  bool check = false;
  std::vector<std::string> names;
  for (auto id : all_presets()) names.push_back(preset_name(id));
  preset->add_option("id", preset_id, "Preset name")->required()->check(CLI::IsMember(names));
  preset->add_flag("--check", check, "Exit with status 4 when a built-in check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const RunConfig cfg = common.load();
    const bool write = common.out.has_value();
    if (geometry->parsed()) return cmd_geometry(cfg, write);
    if (steady->parsed()) return cmd_steady(cfg, write);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (demod->parsed()) return cmd_demodulate(cfg, trace);
    if (ber->parsed()) return print_report(run_preset(PresetId::BerSweep, cfg, cfg.out_dir), false);
    if (preset->parsed()) {
      const PresetId id = *parse_preset(preset_id);
      const fs::path dir = common.out ? cfg.out_dir : cfg.out_dir / preset_name(id);
      return print_report(run_preset(id, cfg, dir), check);
    }
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) std::cerr << "config error: " << issue << '\n';
    return kConfig;
  } catch (const UnstableCavityError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << '\n';
    return kFault;
  } catch (const DemodError& e) {
    std::cerr << "demodulation error: " << e.what() << '\n';
    return kFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
