#pragma once

#include <stdexcept>
#include <string>

namespace cspath {

/// A computation finished but its result cannot be trusted (quadrature did not
/// converge, a value blew up, a solve was singular).
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericError {
public:
  using NumericError::NumericError;
};

/// No polynomial Berezin symbol of the requested degree reproduces the operator.
class NoSymbolError : public NumericError {
public:
  NoSymbolError(const std::string& what, double residual)
      : NumericError(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

}  // namespace cspath
