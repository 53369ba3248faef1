#pragma once

#include <stdexcept>
#include <string>

namespace gcnet {

/// Malformed or inconsistent user input (files, config, arguments).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine received data it cannot work with.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Likelihood optimization failed from every start point.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean residuals have zero variance; no volatility model can be fitted.
class DegenerateVariance : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace gcnet
