#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace porous {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument: nonpositive permeability/viscosity, bad grid
/// dimensions, field shape mismatch, out-of-range design variables.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Pure-velocity boundary data whose discrete net flux does not vanish.
class CompatibilityError : public Error {
 public:
  CompatibilityError(const std::string& msg, double net_flux)
      : Error(msg), net_flux_(net_flux) {}
  double net_flux() const { return net_flux_; }

 private:
  double net_flux_ = 0.0;
};

/// Linear solver failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// shift_pressure_datum called on a problem whose pressure data is not a
/// single constant (or whose body force is nonzero).
class NotShiftableError : public Error {
 public:
  using Error::Error;
};

/// analytical_adjoint called for a problem outside classes A-D.
class NotAnalyticallySolvableError : public Error {
 public:
  using Error::Error;
};

/// A library-level invariant check failed (monotonicity, sign property, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Configuration rejected by the schema validator. Carries every violation
/// found, each prefixed by its field path.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) {
      out += "\n  - " + s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace porous
