#pragma once

#include <stdexcept>
#include <string>

namespace levyfock {

// Base class for all library errors. Everything thrown on purpose derives
// from this, so callers (and the C API layer) can catch one type.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or self-inconsistent input (bad grids, bad atom lists, ...).
class InvalidInputError : public Error {
public:
  using Error::Error;
};

// JSON / CSV document does not match the documented schema.
class ParseError : public Error {
public:
  using Error::Error;
};

// A moment or exponent integral required by the chosen convention does not
// converge (divergent Levy-measure moment, inadmissible conversion target).
class IntegrabilityError : public Error {
public:
  using Error::Error;
};

// Adaptive quadrature exhausted its interval budget without reaching the
// requested tolerance.
class QuadratureError : public Error {
public:
  using Error::Error;
};

// Continuous-logarithm extraction failed.
class BranchError : public Error {
public:
  using Error::Error;
};
class ZeroCrossingError : public BranchError {
public:
  using BranchError::BranchError;
};
class AliasingError : public BranchError {
public:
  using BranchError::BranchError;
};

// A matrix required to be (Hermitian) positive semidefinite is not.
class NotPsdError : public Error {
public:
  using Error::Error;
};

// A grid-function value was requested at a point that is neither on the grid
// nor reachable by Hermitian extension.
class UnevaluableError : public Error {
public:
  using Error::Error;
};

// A configured size budget (Fock dimension, sampler activity) was exceeded.
class BudgetError : public Error {
public:
  using Error::Error;
};

}  // namespace levyfock
