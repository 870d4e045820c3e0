#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "resobeam/fir.hpp"
#include "resobeam/waveform.hpp"

namespace resobeam {

using Bitstream = std::vector<std::uint8_t>;

/// ASCII '0'/'1' characters; whitespace is ignored, anything else throws.
Bitstream parse_bitstream(std::string_view text);
Bitstream read_bitstream(const std::filesystem::path& path);
/// Uniform i.i.d. bits from a seeded 64-bit Mersenne twister.
Bitstream random_bitstream(std::size_t count, std::uint64_t seed);

/// On-off keying of the intra-cavity modulator: bit x maps to the
/// transmissivity (1 - p) x + p, held for one bit period.
struct ModulationConfig {
  double bit_rate = 1e9;
  double bias = 0.98;
  Bitstream bits;

  double level(std::uint8_t bit) const { return (1.0 - bias) * (bit ? 1.0 : 0.0) + bias; }
  double bit_period() const { return 1.0 / bit_rate; }
  std::vector<std::string> validate() const;
};

/// Integer samples per bit at step dt; throws DemodError below 2.
std::size_t samples_per_bit(double bit_rate, double dt);

/// NRZ control signal covering `duration`; the bitstream repeats if short.
Waveform make_control_signal(const ModulationConfig& cfg, double dt, double duration);

/// Reconstruction of the ADC samples on the simulation grid.
enum class Upsampling { Hold, Linear };

struct DemodConfig {
  double split_ratio = 0.1;
  double responsivity = 0.6;  ///< A/W
  double load_ohm = 1.0;
  FilterSpec lpf1;
  FilterSpec lpf2;
  double adc_interval = 0.1e-9;  ///< s
  int adc_bits = 10;
  double adc_full_scale = 2.5;   ///< V
  std::optional<long> round_trip_steps;  ///< exact n_c when known
  std::optional<double> distance_hint;   ///< m, used when n_c is not given
  long delay_search = 8;                 ///< half-width of the delay search, samples
  int segment_length = 500;
  int training_bits = 200;
  double noise_variance = 0.0;  ///< V^2 at the photodetector output
  double divide_floor = 1e-6;   ///< V; smaller denominators are flagged
  Upsampling upsampling = Upsampling::Linear;

  std::vector<std::string> validate() const;
};

/// V = r * rho * R_load * P + n, n ~ N(0, sigma_n^2), seeded.
Waveform photodetect(const Waveform& power, const DemodConfig& cfg, std::uint64_t seed);

struct AdcOutput {
  Waveform levels;                         ///< reconstructed voltages at T_adc
  std::vector<std::size_t> source_index;   ///< input sample picked for each output
  std::size_t saturated = 0;               ///< samples clipped at either rail
};

/// Nearest-sample pick every T_adc, clip to [0, V_max], truncate to the
/// level floor with step V_max / 2^bits (top code 2^bits - 1).
AdcOutput adc(const Waveform& signal, const DemodConfig& cfg);

/// Zero-order hold of the ADC output back onto the input grid.
Waveform hold_to_grid(const AdcOutput& samples, const Waveform& grid);
/// Straight lines between ADC samples; held flat after the last one.
Waveform interpolate_to_grid(const AdcOutput& samples, const Waveform& grid);
Waveform upsample(const AdcOutput& samples, const Waveform& grid, Upsampling mode);

struct Divided {
  Waveform ratio;
  std::vector<std::uint8_t> valid;
  std::size_t warmup = 0;   ///< leading samples without a delayed partner
  std::size_t invalid = 0;  ///< total flagged samples including warm-up
};

/// y[n] = x[n] / x[n - delay]. Flagged samples carry the previous valid
/// ratio (1 before the first one) so the result stays filterable.
Divided delay_divide(const Waveform& x, std::size_t delay, double floor);

struct SymbolTiming {
  std::size_t first_sample = 0;     ///< index in y where symbol 0 starts
  double samples_per_symbol = 1.0;
  std::size_t symbol_count = 0;
};

struct Decisions {
  Bitstream bits;
  std::size_t phase = 0;
  std::vector<double> thresholds;  ///< one per segment
  std::size_t training_errors = 0;
  double spread = 0.0;             ///< within-level scatter / level separation
  bool single_segment_fallback = false;
};

/// Samples y once per symbol at the best integer phase (fewest training
/// errors, earliest phase on ties), thresholds each segment at its mean and
/// decides 1 iff the sample is strictly above.
Decisions decide_bits(const Waveform& y, const SymbolTiming& timing, std::span<const std::uint8_t> training,
                      int segment_length);

struct BerReport {
  double sample_rate_hz = 0.0;
  int adc_bits = 0;
  double noise_var = 0.0;
  std::size_t bits_compared = 0;
  std::size_t errors = 0;
  double ber = 0.0;
  std::size_t phase = 0;
  long n_c = 0;
  std::vector<double> thresholds;
  std::uint64_t seed = 0;
};

BerReport ber(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx);

/// Where the modulated symbols sit in the received power waveform.
struct LinkTiming {
  std::size_t modulation_start = 0;  ///< index of the first modulated sample of s
  double bit_rate = 1e9;
};

struct DelaySearch {
  long best = 0;
  std::vector<std::pair<long, double>> ber_by_delay;
};

/// Post-ADC receiver core shared by the delay search and the final
/// decision: divide, LPF2, decide.
struct ReceiverOutput {
  Waveform y;
  Decisions decisions;
  std::size_t group_delay = 0;
};

struct DemodResult {
  Waveform voltage;
  Waveform filtered;
  Waveform held;
  ReceiverOutput receiver;
  DelaySearch search;
  BerReport report;
  std::size_t adc_saturated = 0;
};

/// Exhaustive search of delays hint-window .. hint+window over the
/// training bits. Lowest training BER wins; equal BER falls back to the
/// smaller within-level spread, then to the smaller delay.
DelaySearch estimate_delay(const Waveform& held, long hint, long window, const DemodConfig& cfg,
                           const LinkTiming& timing, std::span<const std::uint8_t> tx, std::size_t pre_delay);

ReceiverOutput receive(const Waveform& held, long delay, const DemodConfig& cfg, const LinkTiming& timing,
                       std::span<const std::uint8_t> tx, std::size_t symbols, std::size_t pre_delay);

/// Analog part of the receiver: photodetector (with noise) and LPF1.
struct FrontEnd {
  Waveform voltage;
  Filtered filtered;
  std::uint64_t seed = 0;
};

FrontEnd front_end(const Waveform& p_out, const DemodConfig& cfg, std::uint64_t seed);

/// Digital part: ADC, hold, delay search, divide, LPF2, decisions, BER
/// against tx. The front end must come from the same noise settings.
DemodResult demodulate(const FrontEnd& analog, const DemodConfig& cfg, const LinkTiming& timing,
                       std::span<const std::uint8_t> tx, long n_c_hint);

/// Whole chain.
DemodResult demodulate(const Waveform& p_out, const DemodConfig& cfg, const LinkTiming& timing,
                       std::span<const std::uint8_t> tx, long n_c_hint, std::uint64_t seed);

}  // namespace resobeam
