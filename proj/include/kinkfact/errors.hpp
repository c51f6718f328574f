#pragma once

#include <stdexcept>
#include <string>

namespace kinkfact {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input outside the supported families or templates.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// The factorization conditions admit no real solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A bracket pair whose u'-coefficient is not constant.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Numerical integration left its admissible region.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// Front reached the domain boundary before the run finished.
class TruncatedRunError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace kinkfact
