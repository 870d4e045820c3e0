#include "resobeam/gain_dynamics.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "resobeam/errors.hpp"

namespace resobeam {
namespace {

[[noreturn]] void overstep(double N2, double phi_sum, double next) {
  std::ostringstream msg;
  msg << "rate-equation-overstep: N2 = " << N2 << " m^-3 with incident density " << phi_sum
      << " m^-3 would become " << next << "; the time step is too coarse for this photon density";
  throw RateEquationOverstep(msg.str());
}

}  // namespace

double GainMediumParams::area() const { return M_PI * a_g * a_g; }

std::vector<std::string> GainMediumParams::validate() const {
  std::vector<std::string> issues;
  const auto positive = [&](const char* key, double v) {
    if (!(v > 0.0)) issues.push_back(std::string("medium.") + key + " must be > 0");
  };
  positive("sigma", sigma);
  positive("tau_f", tau_f);
  positive("tau_21", tau_21);
  positive("I_s", I_s);
  positive("a_g", a_g);
  positive("l_g", l_g);
  positive("lambda", lambda);
  positive("c", c);
  positive("h", h);
  if (!(beta > 0.0 && beta < 1.0)) issues.emplace_back("medium.beta must be in (0, 1)");
  if (!(eta_c > 0.0 && eta_c <= 1.0)) issues.emplace_back("medium.eta_c must be in (0, 1]");
  if (n_slices < 1) issues.emplace_back("medium.n_slices must be >= 1");
  return issues;
}

double pump_rate(double P_in, const GainMediumParams& p) {
  if (P_in < 0.0) throw std::invalid_argument("pump_rate: P_in must be >= 0");
  return p.eta_c * P_in / (p.photon_energy() * p.volume());
}

double spontaneous_rate(double N2, const GainMediumParams& p) { return p.beta * N2 / p.tau_21; }

double density_to_power(double phi, const GainMediumParams& p) {
  return p.area() * p.c * p.photon_energy() * phi;
}

double power_to_density(double power, const GainMediumParams& p) {
  return power / (p.area() * p.c * p.photon_energy());
}

SliceStep slice_step(double N2, double phi1_in, double phi3_in, double R_p_slice, const GainMediumParams& p) {
  const double l_s = p.slice_thickness();
  const double seed = spontaneous_rate(N2, p) * l_s / (2.0 * p.c);
  const double phi_sum = phi1_in + phi3_in;
  SliceStep out;
  out.phi2_out = phi1_in + N2 * phi1_in * p.sigma * l_s + seed;
  out.phi4_out = phi3_in + N2 * phi3_in * p.sigma * l_s + seed;
  out.N2_next = N2 - N2 * phi_sum * p.sigma * l_s - N2 * l_s / (p.tau_f * p.c) + R_p_slice * l_s / p.c;
  if (out.N2_next < 0.0) overstep(N2, phi_sum, out.N2_next);
  return out;
}

GainCascade::GainCascade(const GainMediumParams& params)
    : params_(params),
      n2_(static_cast<std::size_t>(params.n_slices), 0.0),
      right_in_(static_cast<std::size_t>(params.n_slices), 0.0) {
  if (params.n_slices < 1) throw std::invalid_argument("GainCascade: n_slices must be >= 1");
  const double l_s = params.slice_thickness();
  const double n = params.n_slices;
  gain_coeff_ = params.sigma * l_s;
  seed_coeff_ = params.beta / params.tau_21 * l_s / (2.0 * params.c);
  deplete_coeff_ = params.sigma * l_s * n;
  decay_coeff_ = l_s * n / (params.tau_f * params.c);
  set_pump(0.0);
}

void GainCascade::set_pump(double P_in) {
  pump_power_ = P_in;
  // P_in / n into a slice of volume V / n gives the full-medium rate.
  const double n = params_.n_slices;
  const double rate = pump_rate(P_in / n, params_) * n;
  pump_term_ = rate * params_.slice_thickness() * n / params_.c;
}

GainCascade::Output GainCascade::step(double right_in, double left_in) {
  const std::size_t n = n2_.size();
  double right = right_in;
  for (std::size_t i = 0; i < n; ++i) {
    right_in_[i] = right;
    right = right * (1.0 + n2_[i] * gain_coeff_) + n2_[i] * seed_coeff_;
  }
  double left = left_in;
  for (std::size_t i = n; i-- > 0;) {
    const double N2 = n2_[i];
    const double incident = right_in_[i] + left;
    left = left * (1.0 + N2 * gain_coeff_) + N2 * seed_coeff_;
    const double next = N2 - N2 * (incident * deplete_coeff_ + decay_coeff_) + pump_term_;
    if (next < 0.0) overstep(N2, incident, next);
    n2_[i] = next;
  }
  return {right, left};
}

void GainCascade::set_populations(std::span<const double> values) {
  if (values.size() != n2_.size()) throw std::invalid_argument("set_populations: slice count mismatch");
  for (double v : values) {
    if (!(v >= 0.0)) throw std::invalid_argument("set_populations: N2 must be >= 0");
  }
  n2_.assign(values.begin(), values.end());
}

double GainCascade::mean_population() const {
  return std::accumulate(n2_.begin(), n2_.end(), 0.0) / static_cast<double>(n2_.size());
}

}  // namespace resobeam
