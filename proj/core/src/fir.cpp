#include "resobeam/fir.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "resobeam/errors.hpp"
#include "resobeam/fourier.hpp"

namespace resobeam {
namespace {

constexpr std::size_t kMaxTaps = std::size_t{1} << 22;
constexpr std::size_t kDirectLimit = 64;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double kaiser_beta(double atten_db) {
  if (atten_db > 50.0) return 0.1102 * (atten_db - 8.7);
  if (atten_db >= 21.0) return 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0);
  return 0.0;
}

std::vector<double> kaiser_sinc(std::size_t n_taps, double cutoff, double beta) {
  std::vector<double> h(n_taps);
  const double centre = 0.5 * static_cast<double>(n_taps - 1);
  const double norm = std::cyl_bessel_i(0.0, beta);
  for (std::size_t k = 0; k < n_taps; ++k) {
    const double m = static_cast<double>(k) - centre;
    const double x = 2.0 * cutoff * m;
    const double sinc = (m == 0.0) ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
    const double r = centre > 0.0 ? m / centre : 0.0;
    const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
    h[k] = 2.0 * cutoff * sinc * w;
  }
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& v : h) v /= sum;
  return h;
}

/// Largest |H| over the stopband, from a zero-padded DFT.
double worst_stopband(const std::vector<double>& h, double stop_norm) {
  const std::size_t len = next_pow2(std::max<std::size_t>(16 * h.size(), 4096));
  std::vector<double> padded(len, 0.0);
  std::copy(h.begin(), h.end(), padded.begin());
  const auto bins = real_dft(padded);
  double worst = 0.0;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(len);
    if (f >= stop_norm) worst = std::max(worst, std::abs(bins[k]));
  }
  return worst;
}

class OverlapAdd {
 public:
  OverlapAdd(std::span<const double> taps, std::size_t fft_len)
      : len_(fft_len), time_(fft_len), freq_(fft_len / 2 + 1), kernel_(fft_len / 2 + 1) {
    std::lock_guard lock(detail::fftw_planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(len_), time_.data(),
                                    reinterpret_cast<fftw_complex*>(freq_.data()), FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(len_), reinterpret_cast<fftw_complex*>(freq_.data()),
                                    time_.data(), FFTW_ESTIMATE);
    std::fill(time_.begin(), time_.end(), 0.0);
    std::copy(taps.begin(), taps.end(), time_.begin());
    fftw_execute(forward_);
    kernel_ = freq_;
  }
  ~OverlapAdd() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  OverlapAdd(const OverlapAdd&) = delete;
  OverlapAdd& operator=(const OverlapAdd&) = delete;

  /// Circular convolution of `block` (zero padded) with the kernel.
  const std::vector<double>& convolve(std::span<const double> block) {
    std::fill(time_.begin(), time_.end(), 0.0);
    std::copy(block.begin(), block.end(), time_.begin());
    fftw_execute(forward_);
    for (std::size_t k = 0; k < freq_.size(); ++k) freq_[k] *= kernel_[k];
    fftw_execute(inverse_);
    const double scale = 1.0 / static_cast<double>(len_);
    for (double& v : time_) v *= scale;
    return time_;
  }

 private:
  std::size_t len_;
  std::vector<double> time_;
  std::vector<std::complex<double>> freq_;
  std::vector<std::complex<double>> kernel_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

}  // namespace

FirFilter::FirFilter(std::vector<double> taps) : taps_(std::move(taps)) {
  if (taps_.empty() || taps_.size() % 2 == 0) throw DemodError("FirFilter: need an odd, non-zero tap count");
}

FirFilter FirFilter::design_lowpass(const FilterSpec& spec, double sample_rate) {
  const double nyquist = 0.5 * sample_rate;
  if (!(spec.passband_hz > 0.0 && spec.passband_hz < spec.stopband_hz && spec.stopband_hz < nyquist)) {
    throw DemodError("lowpass: need 0 < passband < stopband < Nyquist (" + std::to_string(nyquist) + " Hz)");
  }
  if (!(spec.attenuation_db > 0.0)) throw DemodError("lowpass: attenuation must be > 0 dB");
  const double width = (spec.stopband_hz - spec.passband_hz) / sample_rate;
  const double cutoff = 0.5 * (spec.passband_hz + spec.stopband_hz) / sample_rate;
  const double stop_norm = spec.stopband_hz / sample_rate;
  const double beta = kaiser_beta(spec.attenuation_db);
  const double limit = std::pow(10.0, -spec.attenuation_db / 20.0);

  auto order = static_cast<std::size_t>(std::ceil((spec.attenuation_db - 7.95) / (2.285 * 2.0 * M_PI * width)));
  order = std::max<std::size_t>(order, 2);
  std::size_t n_taps = order + 1;
  if (n_taps % 2 == 0) ++n_taps;
  for (;;) {
    if (n_taps > kMaxTaps) throw DemodError("lowpass: specification needs more than 2^22 taps");
    auto taps = kaiser_sinc(n_taps, cutoff, beta);
    if (worst_stopband(taps, stop_norm) <= limit) return FirFilter(std::move(taps));
    n_taps += 2 * std::max<std::size_t>(1, n_taps / 50);
  }
}

std::vector<double> FirFilter::apply(std::span<const double> x) const {
  std::vector<double> y(x.size(), 0.0);
  if (x.empty()) return y;
  const std::size_t n_taps = taps_.size();
  // Left extension by the first sample: the filter starts in steady state.
  std::vector<double> ext(n_taps - 1 + x.size());
  std::fill(ext.begin(), ext.begin() + static_cast<std::ptrdiff_t>(n_taps - 1), x.front());
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(n_taps - 1));

  if (n_taps <= kDirectLimit) {
    for (std::size_t n = 0; n < x.size(); ++n) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n_taps; ++k) acc += taps_[k] * ext[n + n_taps - 1 - k];
      y[n] = acc;
    }
    return y;
  }

  const std::size_t fft_len = next_pow2(std::max<std::size_t>(4 * n_taps, 1 << 14));
  const std::size_t block = fft_len - n_taps + 1;
  OverlapAdd engine(taps_, fft_len);
  std::vector<double> full(ext.size() + n_taps - 1, 0.0);
  for (std::size_t start = 0; start < ext.size(); start += block) {
    const std::size_t count = std::min(block, ext.size() - start);
    const auto& out = engine.convolve(std::span<const double>(ext).subspan(start, count));
    const std::size_t produced = std::min(count + n_taps - 1, full.size() - start);
    for (std::size_t k = 0; k < produced; ++k) full[start + k] += out[k];
  }
  std::copy(full.begin() + static_cast<std::ptrdiff_t>(n_taps - 1),
            full.begin() + static_cast<std::ptrdiff_t>(n_taps - 1 + x.size()), y.begin());
  return y;
}

double FirFilter::magnitude(double f, double fs) const {
  std::complex<double> acc{0.0, 0.0};
  const double w = -2.0 * M_PI * f / fs;
  for (std::size_t k = 0; k < taps_.size(); ++k) acc += taps_[k] * std::polar(1.0, w * static_cast<double>(k));
  return std::abs(acc);
}

Filtered lowpass(const Waveform& signal, const FilterSpec& spec) {
  if (!(signal.dt > 0.0)) throw DemodError("lowpass: sample interval must be > 0");
  const FirFilter filter = FirFilter::design_lowpass(spec, 1.0 / signal.dt);
  Filtered out;
  out.wave.dt = signal.dt;
  out.wave.t_start = signal.t_start;
  out.wave.unit = signal.unit;
  out.wave.samples = filter.apply(signal.samples);
  out.group_delay = filter.group_delay();
  return out;
}

}  // namespace resobeam
