#pragma once

#include <stdexcept>
#include <string>

namespace cltlab {

/// Argument outside the domain of an operation (d = 0, non-unit direction, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure produced or received a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partial integrals keep growing as the truncation radius is pushed out.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A bound needs a moment the law does not have (e.g. E|W|^4 = inf).
class MomentAbsentError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A representation's integrability hypothesis fails at the requested point.
class HypothesisError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Name lookup in the model catalog failed.
class UnknownModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cltlab
