#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resobeam/cavity_sim.hpp"
#include "resobeam/geometry.hpp"
#include "resobeam/gain_dynamics.hpp"
#include "resobeam/modem.hpp"
#include "resobeam/steady_state.hpp"

namespace resobeam {

/// Grids and timings used by the sweep and figure presets.
struct SweepConfig {
  std::vector<double> steady_P_in{30, 40, 50, 60, 70, 80};
  std::vector<double> steady_R_M2{0.85, 0.90, 0.95, 0.995};
  double steady_duration = 1e-3;
  double steady_tail = 0.1;  ///< share of the run averaged for the stable value
  std::vector<double> relax_P_in{20, 40, 60, 80};
  std::vector<double> relax_R_M2{0.9, 0.95, 0.995};
  double relax_duration = 1e-3;
  double warmup = 0.5e-3;             ///< pump-on time before intrusion / modulation experiments
  double intrusion_dwell = 200e-6;    ///< fully blocked time between the two ramps
  double intrusion_after = 100e-6;    ///< recorded time after reopening
  double spectrum_window = 100e-6;    ///< modulated time analysed for the gain spectrum
  double modulation_on = 150e-6;      ///< modulation-response window
  double modulation_after = 100e-6;
  double modulation_lead = 300e-6;    ///< random OOK before the demodulated bits
  std::size_t demo_bits = 1000;
  std::vector<double> ber_rates{1e9, 2e9, 2.5e9, 5e9, 10e9, 20e9};
  std::vector<int> ber_adc_bits{8, 10};
  std::vector<double> ber_noise{0.0, 1e-5};
  std::size_t ber_bit_count = 10000;
};

/// Everything one invocation needs. Defaults are the reference system.
struct RunConfig {
  CavityGeometry geometry;
  bool explicit_positions = false;  ///< false: positions follow f, l, d
  double gain_offset = 0.0;         ///< m, gain medium distance from L1 towards M1
  LossBudget loss;
  GainMediumParams medium;
  PumpChain pump_chain;
  std::optional<long> n_L;          ///< derived from the geometry when unset
  std::optional<long> n_R;

  double P_in = 60.0;               ///< W, pump from t = 0 unless a schedule is given
  std::vector<PumpInterval> pump_schedule;
  double duration = 1e-3;
  std::vector<Intrusion> intrusions;
  double bit_rate = 1e9;
  double bias = 0.98;
  std::string bits = "random:1000"; ///< random:N | file:PATH | literal 0/1 digits
  std::vector<TimeWindow> modulation_windows;
  std::vector<Channel> channels{Channel::OutputPower};
  long decimation = 1000;
  std::vector<RecordWindow> record_windows;

  DemodConfig demod;
  SweepConfig sweep;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;

  /// Geometry with positions re-derived (unless explicit) and a_g, lambda
  /// taken from the medium.
  CavityGeometry resolved_geometry() const;
  /// Medium with eta_c from the pump chain.
  GainMediumParams resolved_medium() const;
  /// Throws UnstableCavityError / ConfigError like the underlying calls.
  CavityConfig cavity() const;
  Bitstream bitstream() const;
  Scenario scenario() const;

  /// Every violated invariant, as "field.path: message".
  std::vector<std::string> validate() const;
};

/// Parses the sectioned key/value text. `origin` labels parse errors.
/// Parse errors throw ConfigError with line:column; unknown keys and bad
/// values are collected and thrown together; then validate() runs.
RunConfig parse_config(std::string_view text, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Applies "section.key=value" overrides in order, then revalidates.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments);

/// Fully resolved config text; parse_config() of it gives back an equal
/// config.
std::string to_config_text(const RunConfig& cfg);

/// Names of every recognised key, "section.key".
std::vector<std::string> config_keys();

}  // namespace resobeam
