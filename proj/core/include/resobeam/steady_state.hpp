#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace resobeam {

/// Static loss factors of the resonator. All values are fractions in (0, 1].
struct LossBudget {
  double R_M1_EOM = 0.985;
  double Gamma_L1 = 0.99;
  double Gamma_L2 = 0.99;
  double Gamma_g = 0.99;
  double Gamma_air = 1.0;
  double Gamma_diff = 1.0;
  double R_M2 = 0.9;

  /// Equivalent reflectivity on the M1 side of the gain medium.
  double left_reflectivity() const { return R_M1_EOM * Gamma_L1 * Gamma_L1 * Gamma_diff * Gamma_g * Gamma_g; }
  /// Equivalent reflectivity on the M2 side of the gain medium.
  double right_reflectivity() const { return Gamma_air * Gamma_air * Gamma_L2 * Gamma_L2 * R_M2; }
  /// Product of every static loss factor met in one round trip.
  double static_loss() const {
    return R_M1_EOM * Gamma_L1 * Gamma_L1 * Gamma_g * Gamma_g * Gamma_diff * Gamma_air * Gamma_air *
           Gamma_L2 * Gamma_L2 * R_M2;
  }
  double output_transmissivity() const { return 1.0 - R_M2; }

  std::vector<std::string> validate() const;
};

/// Pump-to-population efficiency chain. Either the combined efficiency, the
/// six sub-efficiencies, or both (then they must agree to 1e-6 relative).
struct PumpChain {
  struct Factors {
    double eta_p = 1.0;  ///< diode electro-optic conversion
    double eta_t = 1.0;  ///< pump transmission
    double eta_a = 1.0;  ///< absorption
    double eta_Q = 1.0;  ///< quantum efficiency
    double eta_S = 1.0;  ///< Stokes factor
    double eta_B = 1.0;  ///< overlap
    double product() const { return eta_B * eta_S * eta_Q * eta_a * eta_t * eta_p; }
  };

  std::optional<double> eta_c = 0.439;
  std::optional<Factors> factors;

  /// Resolved combined efficiency. Throws ConfigError when inconsistent.
  double combined() const;
  std::vector<std::string> validate() const;
};

double threshold_power(const LossBudget& loss, const PumpChain& pump, double a_g, double I_s);

double slope_efficiency(const LossBudget& loss, const PumpChain& pump);

struct OutputPower {
  double watts = 0.0;
  bool below_threshold = false;
};

/// Closed-form stable-state output through M2; clamped to zero at or below
/// threshold.
OutputPower output_power(double P_in, const LossBudget& loss, const PumpChain& pump, double a_g, double I_s);

}  // namespace resobeam
