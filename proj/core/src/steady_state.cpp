#include "resobeam/steady_state.hpp"

#include <cmath>
#include <stdexcept>

#include "resobeam/errors.hpp"

namespace resobeam {
namespace {

void check_fraction(std::vector<std::string>& issues, const char* path, double v) {
  if (!(v > 0.0 && v <= 1.0)) issues.push_back(std::string(path) + " must be in (0, 1], got " + std::to_string(v));
}

}  // namespace

std::vector<std::string> LossBudget::validate() const {
  std::vector<std::string> issues;
  check_fraction(issues, "loss.R_M1_EOM", R_M1_EOM);
  check_fraction(issues, "loss.Gamma_L1", Gamma_L1);
  check_fraction(issues, "loss.Gamma_L2", Gamma_L2);
  check_fraction(issues, "loss.Gamma_g", Gamma_g);
  check_fraction(issues, "loss.Gamma_air", Gamma_air);
  check_fraction(issues, "loss.Gamma_diff", Gamma_diff);
  check_fraction(issues, "loss.R_M2", R_M2);
  return issues;
}

std::vector<std::string> PumpChain::validate() const {
  std::vector<std::string> issues;
  if (!eta_c && !factors) issues.emplace_back("pump.eta_c: no combined efficiency or sub-efficiencies given");
  if (eta_c) check_fraction(issues, "pump.eta_c", *eta_c);
  if (factors) {
    check_fraction(issues, "pump.eta_p", factors->eta_p);
    check_fraction(issues, "pump.eta_t", factors->eta_t);
    check_fraction(issues, "pump.eta_a", factors->eta_a);
    check_fraction(issues, "pump.eta_Q", factors->eta_Q);
    check_fraction(issues, "pump.eta_S", factors->eta_S);
    check_fraction(issues, "pump.eta_B", factors->eta_B);
  }
  if (eta_c && factors) {
    const double product = factors->product();
    if (std::abs(product - *eta_c) > 1e-6 * std::abs(*eta_c)) {
      issues.push_back("pump.eta_c = " + std::to_string(*eta_c) +
                       " disagrees with the sub-efficiency product " + std::to_string(product));
    }
  }
  return issues;
}

double PumpChain::combined() const {
  if (auto issues = validate(); !issues.empty()) throw ConfigError(std::move(issues));
  return eta_c ? *eta_c : factors->product();
}

double threshold_power(const LossBudget& loss, const PumpChain& pump, double a_g, double I_s) {
  const double r1r2 = loss.left_reflectivity() * loss.right_reflectivity();
  return M_PI * a_g * a_g * I_s / pump.combined() * std::log(1.0 / std::sqrt(r1r2));
}

double slope_efficiency(const LossBudget& loss, const PumpChain& pump) {
  const double r1 = loss.left_reflectivity();
  const double r2 = loss.right_reflectivity();
  return pump.combined() / ((1.0 + std::sqrt(r2 / r1)) * (1.0 - std::sqrt(r1 * r2)));
}

OutputPower output_power(double P_in, const LossBudget& loss, const PumpChain& pump, double a_g, double I_s) {
  if (P_in < 0.0) throw std::invalid_argument("output_power: P_in must be >= 0");
  const double p_th = threshold_power(loss, pump, a_g, I_s);
  if (P_in <= p_th) return {0.0, true};
  const double coupling = loss.output_transmissivity() * loss.Gamma_L2 * loss.Gamma_air;
  return {coupling * slope_efficiency(loss, pump) * (P_in - p_th), false};
}

}  // namespace resobeam
