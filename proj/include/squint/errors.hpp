#pragma once

#include <stdexcept>
#include <string>

namespace squint {

/// Raised when an argument violates an operation's precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A per-element delay does not fit the fixed integer-delay filter.
class CapacityError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Function evaluated outside its mathematical domain (tan at endfire, delay at DC).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Run configuration failed to parse or validate. `field()` names the offending key.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace squint
