#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resobeam/delay_line.hpp"
#include "resobeam/gain_dynamics.hpp"
#include "resobeam/geometry.hpp"
#include "resobeam/modem.hpp"
#include "resobeam/steady_state.hpp"
#include "resobeam/waveform.hpp"

namespace resobeam {

struct PathDelays {
  long n_L = 0;  ///< gain medium -> M1, in steps of l_g / c
  long n_R = 0;  ///< gain medium -> M2
  double rounding_error_L = 0.0;  ///< s, (n_L l_g - path) / c
  double rounding_error_R = 0.0;
};

/// One-way delays from the device positions. Throws UnstableCavityError for
/// unstable layouts and std::invalid_argument for a path shorter than l_g.
PathDelays derive_delays(const CavityGeometry& geom, double l_g, double c);

struct CavityConfig {
  CavityGeometry geometry;
  LossBudget loss;
  GainMediumParams medium;
  long n_L = 30;
  long n_R = 3090;

  double dt() const { return medium.time_step(); }
  /// Steps per circulation: 2 (n_L + n_R + 1).
  long round_trip_steps() const { return 2 * (n_L + n_R + 1); }

  /// Config with n_L, n_R derived from the geometry.
  static CavityConfig from_geometry(const CavityGeometry& geom, const LossBudget& loss,
                                    const GainMediumParams& medium);
  std::vector<std::string> validate() const;
};

struct StepResult {
  double p_out = 0.0;      ///< W through M2
  double phi1 = 0.0;       ///< densities entering the medium this step
  double phi3 = 0.0;
  double phi2_next = 0.0;  ///< densities the medium emits for the next step
  double phi4_next = 0.0;
};

/// The circulating loop: gain cascade, two delay lines per side and the
/// static losses. The whole state is a value; copying a simulator is a
/// snapshot.
class CavitySimulator {
 public:
  explicit CavitySimulator(const CavityConfig& config);

  void set_pump(double P_in) { cascade_.set_pump(P_in); }
  double pump() const { return cascade_.pump(); }

  /// One global step with modulator transmissivity s and obstruction
  /// transmissivity gamma_obj (both in [0, 1]).
  StepResult step(double modulator, double obstruction);

  std::int64_t step_index() const { return step_; }
  double time() const { return static_cast<double>(step_) * config_.dt(); }
  const CavityConfig& config() const { return config_; }
  const GainCascade& cascade() const { return cascade_; }
  GainCascade& cascade() { return cascade_; }

  /// Photons in flight outside the medium plus those just emitted by it
  /// (density-steps, proportional to energy).
  double stored_photons() const;

 private:
  CavityConfig config_;
  GainCascade cascade_;
  DelayLine left_out_;    // medium -> M1
  DelayLine left_back_;   // M1 -> medium
  DelayLine right_out_;   // medium -> M2
  DelayLine right_back_;  // M2 -> medium
  double phi2_ = 0.0;
  double phi4_ = 0.0;
  double left_factor_ = 0.0;    // R1
  double right_factor_ = 0.0;   // R2
  double out_factor_ = 0.0;     // Gamma_M2 Gamma_L2 Gamma_air * (W per density)
  std::int64_t step_ = 0;
};

struct PumpInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  double power = 0.0;
};

/// Obstruction: transmissivity falls linearly 1 -> 0 over `ramp` from
/// t_start, stays 0, and rises 0 -> 1 over `ramp` from t_reopen.
struct Intrusion {
  double t_start = 0.0;
  double ramp = 22.7e-6;
  double t_reopen = 0.0;

  double transmissivity(double t) const;
};

struct TimeWindow {
  double t_start = 0.0;
  double t_end = 0.0;
};

enum class Channel { OutputPower, IntracavityPower, GainInput, GainOutput, Population, Modulator, Obstruction };

std::string channel_name(Channel ch);
std::string channel_unit(Channel ch);
std::optional<Channel> parse_channel(const std::string& name);

struct RecordWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  long decimation = 1;
};

struct Scenario {
  double duration = 1e-3;
  std::vector<PumpInterval> pump;
  std::vector<Intrusion> intrusions;
  std::vector<TimeWindow> modulation_windows;
  ModulationConfig modulation;
  std::vector<Channel> channels{Channel::OutputPower};
  long decimation = 1000;
  std::vector<RecordWindow> record_windows;

  std::vector<std::string> validate() const;
};

struct RecordBlock {
  long decimation = 1;
  std::vector<Channel> channels;
  std::vector<Waveform> traces;  ///< parallel to channels

  const Waveform* find(Channel ch) const;
  const Waveform& at(Channel ch) const;
};

struct RunRecord {
  RecordBlock main;
  std::vector<RecordBlock> windows;
  std::int64_t steps = 0;
  double dt = 0.0;
};

/// Advances `sim` from its current time to scenario.duration (absolute
/// time), applying pump schedule, intrusions and modulation windows.
RunRecord run(const Scenario& scenario, CavitySimulator& sim);
RunRecord run(const Scenario& scenario, const CavityConfig& config);

struct GainTrace {
  Waveform gain;
  std::vector<std::uint8_t> valid;
  std::size_t invalid = 0;
};

/// Minimum single-pass input power for a valid gain sample, W.
inline constexpr double kGainMonitorFloor = 1e-15;

/// Single-pass gain G = P2 / P1 from the GainOutput / GainInput channels of
/// a block. Samples with P1 below the floor are flagged and set to 0.
GainTrace gain_monitor(const RecordBlock& block);

}  // namespace resobeam
