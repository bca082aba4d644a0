#pragma once

#include <stdexcept>
#include <string>

namespace icsim {

/// A parameter outside its allowed range; carries the offending field name.
class RangeError : public std::runtime_error {
 public:
  RangeError(std::string field, double value, std::string allowed)
      : std::runtime_error("range error: " + field + " = " + std::to_string(value) +
                           ", allowed " + allowed),
        field_(std::move(field)),
        value_(value) {}

  const std::string& field() const noexcept { return field_; }
  double value() const noexcept { return value_; }

 private:
  std::string field_;
  double value_;
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// g^(2) requested on a vacuum state (|V|^2 = 0).
class ZeroGainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inputs outside the mathematical domain of a formula.
class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Normalized correlation requested on a mode with zero mean photons.
class ZeroPhotonError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fock-space truncation lost more norm than the configured tolerance.
class TruncationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested basis size above the configured cap.
class ResourceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameters outside the regime an approximate model is valid in.
class RegimeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class InsufficientCounts : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace icsim
