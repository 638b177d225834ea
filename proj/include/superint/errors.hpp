#pragma once

#include <stdexcept>
#include <string>

namespace superint {

// A potential denominator fell below its collision guard. Carries the name
// of the offending denominator so callers can report which one vanished.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(std::string denominator, double magnitude)
      : std::runtime_error("singular denominator '" + denominator +
                           "' (|value| = " + std::to_string(magnitude) + ")"),
        denominator_(std::move(denominator)) {}
  const std::string& denominator() const { return denominator_; }

 private:
  std::string denominator_;
};

// Input lies outside a chart's domain (on the axis, at a polar-angle pole).
class ChartDomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or schema-violating experiment configuration.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rejection sampler ran out of attempts without finding a nonsingular point.
class SamplerExhausted : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace superint
