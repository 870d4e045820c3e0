#pragma once

#include <span>
#include <string>
#include <vector>

namespace resobeam {

/// Physical constants of the gain medium (defaults: Nd:YVO4 values used
/// throughout the project). c = 3e8 m/s and h = 6.626e-34 J s reproduce the
/// reference operating-point numbers to all printed digits.
struct GainMediumParams {
  double sigma = 15.6e-23;   ///< stimulated-emission cross section, m^2
  double tau_f = 100e-6;     ///< fluorescence lifetime, s
  double tau_21 = 115e-6;    ///< E2 -> E1 decay time, s
  double beta = 1e-3;        ///< spontaneous-emission coupling factor
  double I_s = 1.1976e7;     ///< saturation intensity, W/m^2
  double a_g = 2e-3;         ///< aperture radius, m
  double l_g = 1e-3;         ///< thickness, m
  double lambda = 1064e-9;   ///< resonant wavelength, m
  double eta_c = 0.439;      ///< combined pump efficiency
  int n_slices = 10;
  double c = 3.0e8;
  double h = 6.626e-34;

  double photon_energy() const { return h * c / lambda; }
  double area() const;
  double volume() const { return area() * l_g; }
  /// Global simulation step: one transit of the medium.
  double time_step() const { return l_g / c; }
  double slice_thickness() const { return l_g / n_slices; }

  std::vector<std::string> validate() const;
};

/// Pump rate R_p (m^-3 s^-1) for input power P_in.
double pump_rate(double P_in, const GainMediumParams& p);

/// Spontaneous-emission coupling rate S (m^-3 s^-1).
double spontaneous_rate(double N2, const GainMediumParams& p);

/// Beam power (W) carried by a traveling photon density (m^-3).
double density_to_power(double phi, const GainMediumParams& p);
double power_to_density(double power, const GainMediumParams& p);

struct SliceStep {
  double phi2_out = 0.0;  ///< rightward density leaving the slice
  double phi4_out = 0.0;  ///< leftward density leaving the slice
  double N2_next = 0.0;
};

/// One sub-step of a single slice of thickness l_g / n_slices, i.e. a time
/// step of l_s / c. Throws RateEquationOverstep instead of returning a
/// negative population.
SliceStep slice_step(double N2, double phi1_in, double phi3_in, double R_p_slice, const GainMediumParams& p);

/// The sliced gain medium. One call to step() advances the whole medium by
/// one global step l_g / c: the rightward density crosses slices 0..n-1 and
/// the leftward density n-1..0, each slice amplifying by (1 + N2 sigma l_s)
/// and adding half its spontaneous seed per direction. Each slice's
/// population then advances n held-input sub-steps of l_s / c, which sums to
/// one global step; with n_slices == 1 this is exactly slice_step().
class GainCascade {
 public:
  struct Output {
    double right = 0.0;  ///< density leaving the right face
    double left = 0.0;   ///< density leaving the left face
  };

  explicit GainCascade(const GainMediumParams& params);

  /// Pump power shared equally between slices.
  void set_pump(double P_in);
  double pump() const { return pump_power_; }

  Output step(double right_in, double left_in);

  std::span<const double> populations() const { return n2_; }
  void set_populations(std::span<const double> values);
  double mean_population() const;
  const GainMediumParams& params() const { return params_; }

 private:
  GainMediumParams params_;
  std::vector<double> n2_;
  std::vector<double> right_in_;  // scratch: rightward density entering each slice
  double pump_power_ = 0.0;
  double gain_coeff_ = 0.0;       // sigma * l_s
  double seed_coeff_ = 0.0;       // beta / tau_21 * l_s / (2c)
  double deplete_coeff_ = 0.0;    // sigma * l_s * n
  double decay_coeff_ = 0.0;      // l_s * n / (tau_f c)
  double pump_term_ = 0.0;        // R_p * l_s * n / c
};

}  // namespace resobeam
