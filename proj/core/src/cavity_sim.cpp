#include "resobeam/cavity_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "resobeam/errors.hpp"

namespace resobeam {
namespace {

std::int64_t to_step(double t, double dt) { return static_cast<std::int64_t>(std::llround(t / dt)); }

template <typename T, typename Start, typename End>
void check_ordered(std::vector<std::string>& issues, const std::vector<T>& items, const char* path, Start start,
                   End end) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!(start(items[i]) < end(items[i]))) {
      issues.push_back(std::string(path) + "[" + std::to_string(i) + "]: start must precede end");
    }
    if (i > 0 && start(items[i]) < end(items[i - 1])) {
      issues.push_back(std::string(path) + "[" + std::to_string(i) + "]: overlaps or precedes the previous entry");
    }
  }
}

}  // namespace

PathDelays derive_delays(const CavityGeometry& geom, double l_g, double c) {
  if (const auto st = is_stable(geom); !st.stable) {
    throw UnstableCavityError("derive_delays: unstable geometry (g1*g2* = " + std::to_string(st.margin) + ")");
  }
  const double path_l = geom.z_g - geom.z_M1;
  const double path_r = geom.z_M2 - geom.z_g;
  const double shortest = l_g * (1.0 - 1e-9);
  if (path_l < shortest || path_r < shortest) {
    throw std::invalid_argument("derive_delays: gain-to-mirror path shorter than one step (l_g)");
  }
  PathDelays out;
  out.n_L = std::max(1L, std::lround(path_l / l_g));
  out.n_R = std::max(1L, std::lround(path_r / l_g));
  out.rounding_error_L = (static_cast<double>(out.n_L) * l_g - path_l) / c;
  out.rounding_error_R = (static_cast<double>(out.n_R) * l_g - path_r) / c;
  return out;
}

CavityConfig CavityConfig::from_geometry(const CavityGeometry& geom, const LossBudget& loss,
                                         const GainMediumParams& medium) {
  const PathDelays delays = derive_delays(geom, medium.l_g, medium.c);
  CavityConfig cfg;
  cfg.geometry = geom;
  cfg.loss = loss;
  cfg.medium = medium;
  cfg.n_L = delays.n_L;
  cfg.n_R = delays.n_R;
  return cfg;
}

std::vector<std::string> CavityConfig::validate() const {
  std::vector<std::string> issues = geometry.validate();
  const auto add = [&](std::vector<std::string> more) { issues.insert(issues.end(), more.begin(), more.end()); };
  add(loss.validate());
  add(medium.validate());
  if (n_L < 1) issues.emplace_back("cavity.n_L must be >= 1");
  if (n_R < 1) issues.emplace_back("cavity.n_R must be >= 1");
  if (issues.empty()) {
    if (const auto st = is_stable(geometry); !st.stable) {
      issues.push_back("geometry: unstable resonator, g1*g2* = " + std::to_string(st.margin) +
                       " (need 0 < g1*g2* < 1)");
    }
  }
  return issues;
}

CavitySimulator::CavitySimulator(const CavityConfig& config)
    : config_(config),
      cascade_(config.medium),
      left_out_(static_cast<std::size_t>(config.n_L)),
      left_back_(static_cast<std::size_t>(config.n_L)),
      right_out_(static_cast<std::size_t>(config.n_R)),
      right_back_(static_cast<std::size_t>(config.n_R)) {
  if (auto issues = config.validate(); !issues.empty()) throw ConfigError(std::move(issues));
  left_factor_ = config.loss.left_reflectivity();
  right_factor_ = config.loss.right_reflectivity();
  out_factor_ = config.loss.output_transmissivity() * config.loss.Gamma_L2 * config.loss.Gamma_air *
                density_to_power(1.0, config.medium);
}

StepResult CavitySimulator::step(double modulator, double obstruction) {
  StepResult r;
  const double phi4_delayed = left_out_.push(phi4_);
  r.phi1 = left_back_.push(left_factor_ * modulator * phi4_delayed);
  const double phi2_delayed = right_out_.push(phi2_);
  r.p_out = out_factor_ * phi2_delayed;
  r.phi3 = right_back_.push(right_factor_ * phi2_delayed) * obstruction;
  const auto emitted = cascade_.step(r.phi1, r.phi3);
  phi2_ = emitted.right;
  phi4_ = emitted.left;
  r.phi2_next = phi2_;
  r.phi4_next = phi4_;
  ++step_;
  if (!(phi2_ + phi4_ <= 1e300)) {
    std::ostringstream msg;
    msg << "non-finite photon density at step " << step_ << " (t = " << time() << " s)";
    throw SimulationFault(msg.str());
  }
  return r;
}

double CavitySimulator::stored_photons() const {
  return left_out_.stored() + left_back_.stored() + right_out_.stored() + right_back_.stored() + phi2_ + phi4_;
}

double Intrusion::transmissivity(double t) const {
  if (t < t_start) return 1.0;
  if (t < t_start + ramp) return 1.0 - (t - t_start) / ramp;
  if (t < t_reopen) return 0.0;
  if (t < t_reopen + ramp) return (t - t_reopen) / ramp;
  return 1.0;
}

std::string channel_name(Channel ch) {
  switch (ch) {
    case Channel::OutputPower: return "P_out";
    case Channel::IntracavityPower: return "P_intra";
    case Channel::GainInput: return "P_gain_in";
    case Channel::GainOutput: return "P_gain_out";
    case Channel::Population: return "N2";
    case Channel::Modulator: return "s";
    case Channel::Obstruction: return "gamma_obj";
  }
  return "?";
}

std::string channel_unit(Channel ch) {
  switch (ch) {
    case Channel::OutputPower:
    case Channel::IntracavityPower:
    case Channel::GainInput:
    case Channel::GainOutput: return "W";
    case Channel::Population: return "m^-3";
    case Channel::Modulator:
    case Channel::Obstruction: return "1";
  }
  return "";
}

std::optional<Channel> parse_channel(const std::string& name) {
  for (Channel ch : {Channel::OutputPower, Channel::IntracavityPower, Channel::GainInput, Channel::GainOutput,
                     Channel::Population, Channel::Modulator, Channel::Obstruction}) {
    if (channel_name(ch) == name) return ch;
  }
  return std::nullopt;
}

std::vector<std::string> Scenario::validate() const {
  std::vector<std::string> issues;
  if (!(duration > 0.0)) issues.emplace_back("scenario.duration must be > 0");
  if (decimation < 1) issues.emplace_back("scenario.decimation must be >= 1");
  check_ordered(issues, pump, "scenario.pump", [](const PumpInterval& p) { return p.t_start; },
                [](const PumpInterval& p) { return p.t_end; });
  for (std::size_t i = 0; i < pump.size(); ++i) {
    if (!(pump[i].power >= 0.0)) issues.push_back("scenario.pump[" + std::to_string(i) + "]: power must be >= 0");
  }
  for (std::size_t i = 0; i < intrusions.size(); ++i) {
    const auto& e = intrusions[i];
    const std::string at = "scenario.intrusion[" + std::to_string(i) + "]";
    if (!(e.ramp > 0.0)) issues.push_back(at + ": ramp duration must be > 0");
    if (!(e.t_reopen >= e.t_start + e.ramp)) issues.push_back(at + ": reopen must follow the closing ramp");
    if (i > 0 && e.t_start < intrusions[i - 1].t_reopen + intrusions[i - 1].ramp) {
      issues.push_back(at + ": overlaps the previous intrusion");
    }
  }
  check_ordered(issues, modulation_windows, "scenario.modulation",
                [](const TimeWindow& w) { return w.t_start; }, [](const TimeWindow& w) { return w.t_end; });
  if (!modulation_windows.empty()) {
    auto more = modulation.validate();
    issues.insert(issues.end(), more.begin(), more.end());
    if (modulation.bits.empty()) issues.emplace_back("modulation.bits: modulation windows need a bitstream");
  }
  check_ordered(issues, record_windows, "scenario.record_windows",
                [](const RecordWindow& w) { return w.t_start; }, [](const RecordWindow& w) { return w.t_end; });
  for (std::size_t i = 0; i < record_windows.size(); ++i) {
    if (record_windows[i].decimation < 1) {
      issues.push_back("scenario.record_windows[" + std::to_string(i) + "]: decimation must be >= 1");
    }
  }
  if (channels.empty()) issues.emplace_back("scenario.channels: at least one channel required");
  return issues;
}

const Waveform* RecordBlock::find(Channel ch) const {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i] == ch) return &traces[i];
  }
  return nullptr;
}

const Waveform& RecordBlock::at(Channel ch) const {
  if (const Waveform* w = find(ch)) return *w;
  throw std::out_of_range("record block has no channel " + channel_name(ch));
}

namespace {

struct StepRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;
};

class Recorder {
 public:
  Recorder(const std::vector<Channel>& channels, long decimation, StepRange range, double dt)
      : range_(range), dt_(dt) {
    block_.decimation = decimation;
    block_.channels = channels;
    for (Channel ch : channels) {
      Waveform w;
      w.dt = dt * static_cast<double>(decimation);
      w.unit = channel_unit(ch);
      w.t_start = -1.0;
      block_.traces.push_back(std::move(w));
    }
  }

  bool wants(std::int64_t n) const {
    return n >= range_.begin && n < range_.end && (n - range_.begin) % block_.decimation == 0;
  }

  void record(std::int64_t n, const StepResult& r, const CavitySimulator& sim, double s, double obj) {
    const auto& medium = sim.config().medium;
    for (std::size_t i = 0; i < block_.channels.size(); ++i) {
      double v = 0.0;
      switch (block_.channels[i]) {
        case Channel::OutputPower: v = r.p_out; break;
        case Channel::IntracavityPower: v = density_to_power(r.phi2_next + r.phi4_next, medium); break;
        case Channel::GainInput: v = density_to_power(r.phi1, medium); break;
        case Channel::GainOutput: v = density_to_power(r.phi2_next, medium); break;
        case Channel::Population: v = sim.cascade().mean_population(); break;
        case Channel::Modulator: v = s; break;
        case Channel::Obstruction: v = obj; break;
      }
      auto& trace = block_.traces[i];
      if (trace.samples.empty()) trace.t_start = static_cast<double>(n) * dt_;
      trace.samples.push_back(v);
    }
  }

  RecordBlock take() {
    for (auto& t : block_.traces) {
      if (t.t_start < 0.0) t.t_start = static_cast<double>(range_.begin) * dt_;
    }
    return std::move(block_);
  }

 private:
  RecordBlock block_;
  StepRange range_;
  double dt_;
};

}  // namespace

RunRecord run(const Scenario& scenario, CavitySimulator& sim) {
  if (auto issues = scenario.validate(); !issues.empty()) throw ConfigError(std::move(issues));
  const double dt = sim.config().dt();
  const std::int64_t first = sim.step_index();
  const std::int64_t last = to_step(scenario.duration, dt);

  struct PumpChange {
    std::int64_t at;
    double power;
  };
  std::vector<PumpChange> pump_changes;
  for (const auto& p : scenario.pump) {
    pump_changes.push_back({to_step(p.t_start, dt), p.power});
    pump_changes.push_back({to_step(p.t_end, dt), 0.0});
  }
  std::stable_sort(pump_changes.begin(), pump_changes.end(),
                   [](const PumpChange& a, const PumpChange& b) { return a.at < b.at; });
  std::size_t next_change = 0;
  // Replay changes already in the past so a resumed run starts consistent.
  double pump_now = 0.0;
  while (next_change < pump_changes.size() && pump_changes[next_change].at <= first) {
    pump_now = pump_changes[next_change++].power;
  }
  if (!scenario.pump.empty()) sim.set_pump(pump_now);

  std::vector<StepRange> intrusion_steps;
  for (const auto& e : scenario.intrusions) {
    intrusion_steps.push_back({to_step(e.t_start, dt), to_step(e.t_reopen + e.ramp, dt) + 1});
  }

  std::vector<StepRange> mod_steps;
  std::size_t spb = 1;
  if (!scenario.modulation_windows.empty()) {
    spb = samples_per_bit(scenario.modulation.bit_rate, dt);
    for (const auto& w : scenario.modulation_windows) mod_steps.push_back({to_step(w.t_start, dt), to_step(w.t_end, dt)});
  }
  const auto& bits = scenario.modulation.bits;
  const double level0 = scenario.modulation.level(0);
  const double level1 = scenario.modulation.level(1);

  Recorder main(scenario.channels, scenario.decimation, {0, last}, dt);
  std::vector<Recorder> windows;
  for (const auto& w : scenario.record_windows) {
    windows.emplace_back(scenario.channels, w.decimation, StepRange{to_step(w.t_start, dt), to_step(w.t_end, dt)}, dt);
  }

  for (std::int64_t n = first; n < last; ++n) {
    while (next_change < pump_changes.size() && pump_changes[next_change].at <= n) {
      sim.set_pump(pump_changes[next_change++].power);
    }
    double obstruction = 1.0;
    for (std::size_t i = 0; i < intrusion_steps.size(); ++i) {
      if (n >= intrusion_steps[i].begin && n < intrusion_steps[i].end) {
        obstruction *= scenario.intrusions[i].transmissivity(static_cast<double>(n) * dt);
      }
    }
    double modulator = 1.0;
    for (const auto& w : mod_steps) {
      if (n >= w.begin && n < w.end) {
        const auto bit_index = static_cast<std::size_t>(n - w.begin) / spb;
        modulator = bits[bit_index % bits.size()] ? level1 : level0;
        break;
      }
    }
    const StepResult r = sim.step(modulator, obstruction);
    if (main.wants(n)) main.record(n, r, sim, modulator, obstruction);
    for (auto& w : windows) {
      if (w.wants(n)) w.record(n, r, sim, modulator, obstruction);
    }
  }

  RunRecord record;
  record.main = main.take();
  for (auto& w : windows) record.windows.push_back(w.take());
  record.steps = std::max<std::int64_t>(0, last - first);
  record.dt = dt;
  return record;
}

RunRecord run(const Scenario& scenario, const CavityConfig& config) {
  CavitySimulator sim(config);
  return run(scenario, sim);
}

GainTrace gain_monitor(const RecordBlock& block) {
  const Waveform& in = block.at(Channel::GainInput);
  const Waveform& out = block.at(Channel::GainOutput);
  GainTrace g;
  g.gain.dt = in.dt;
  g.gain.t_start = in.t_start;
  g.gain.unit = "1";
  g.gain.samples.resize(in.size());
  g.valid.resize(in.size());
  for (std::size_t k = 0; k < in.size(); ++k) {
    if (in.samples[k] >= kGainMonitorFloor) {
      g.gain.samples[k] = out.samples[k] / in.samples[k];
      g.valid[k] = 1;
    } else {
      g.gain.samples[k] = 0.0;
      g.valid[k] = 0;
      ++g.invalid;
    }
  }
  return g;
}

}  // namespace resobeam
