#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resobeam/config.hpp"

namespace resobeam {

enum class PresetId {
  SteadySweep,
  RelaxationPin,
  RelaxationRm2,
  Intrusion,
  ModulationResponse,
  GainSpectrum,
  Demodulation,
  BerSweep,
};

std::string preset_name(PresetId id);
std::optional<PresetId> parse_preset(std::string_view name);
std::vector<PresetId> all_presets();

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct PresetReport {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> summary;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// Runs a preset with `cfg` and writes its CSV tables, SVG plots and a
/// `manifest.cfg` into `out` (created if missing). Checks are always
/// evaluated; the CLI turns failures into an exit code in --check mode.
///
/// Output files:
///   fig7-steady-sweep        steady_pin.csv, steady_rm2.csv
///                            (P_in_W, R_M2, P_out_sim_W, P_out_theory_W, rel_dev, below_threshold)
///   fig8a-relaxation-pin     relaxation_pin.csv (time_s, one P_out column per cell, 100 ns grid),
///   fig8b-relaxation-rm2     relaxation_rm2.csv, and *_metrics.csv
///                            (P_in_W, R_M2, peak_W, peak_time_s, steady_W, peak_to_steady,
///                             frequency_Hz, settle_time_s, lasing)
///   fig-intrusion            intrusion.csv (time_s, P_out_W, gamma_obj; 10 ns grid),
///                            intrusion_pulse.csv (1 ns grid around the pulse), intrusion_metrics.csv
///   fig-modulation-response  modulation_response.csv (time_s, P_out_W, s; 1 ns grid)
///   fig-gain-spectrum        gain_spectrum.csv (frequency_Hz, magnitude; up to 20 MHz),
///                            gain_trace.csv (time_s, G)
///   fig-demodulation         demodulation.csv (time_s, s, P_out_W, V_held, y; every 10th step),
///                            demodulation_bits.csv (bit, tx, rx)
///   fig-ber-sweep            ber.csv (sample_rate_Hz, adc_bits, noise_var, bits_compared,
///                            errors, ber, phase, n_c, seed)
PresetReport run_preset(PresetId id, const RunConfig& cfg, const std::filesystem::path& out);

}  // namespace resobeam
