#pragma once

#include <stdexcept>
#include <string>

namespace plateau {

// Error taxonomy shared by the library and the CLI exit codes:
//   domain/usage -> 2, numerical tolerance -> 3, missing capability -> 4.

class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

class NumericalToleranceError : public std::runtime_error {
public:
  explicit NumericalToleranceError(const std::string& what)
      : std::runtime_error(what) {}
};

class CapabilityError : public std::runtime_error {
public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an inverse-time query runs past the simulated horizon.
// Carries the operational time that would have been needed.
class HorizonError : public std::runtime_error {
public:
  HorizonError(const std::string& what, double needed_s_max)
      : std::runtime_error(what), needed_s_max_(needed_s_max) {}
  double needed_s_max() const noexcept { return needed_s_max_; }

private:
  double needed_s_max_;
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plateau
