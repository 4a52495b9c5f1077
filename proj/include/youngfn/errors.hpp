#pragma once

#include <stdexcept>
#include <string>

namespace youngfn {

/// Argument outside the mathematical domain of an operation (p <= 0, t >= T, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation requested beyond the representable horizon.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Malformed input document or configuration.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A stored artifact contradicts itself (tampered or corrupted table).
class IntegrityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A construction step could not complete (non-decaying tail, quadrature failure, ...).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace youngfn
