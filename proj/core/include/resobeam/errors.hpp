#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace resobeam {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration could not be parsed or failed validation. Carries every
/// violated constraint, each prefixed with its `section.key` path.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  ConfigError(const std::string& path, int line, int column, const std::string& what);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// The cavity has no confined Gaussian mode (0 < g1*g2* < 1 violated).
class UnstableCavityError : public Error {
 public:
  using Error::Error;
};

/// Numerical fault inside the time-domain simulation.
class SimulationFault : public Error {
 public:
  using Error::Error;
};

/// The stimulated-emission depletion in one step exceeded the available
/// population; the time step is too coarse for the photon density.
class RateEquationOverstep : public SimulationFault {
 public:
  using SimulationFault::SimulationFault;
};

/// Receiver-chain failure (unmeetable filter spec, empty search window, ...).
class DemodError : public Error {
 public:
  using Error::Error;
};

}  // namespace resobeam
