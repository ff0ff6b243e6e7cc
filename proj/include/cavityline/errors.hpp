#pragma once

#include <stdexcept>
#include <string>

namespace cavityline {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Cat state whose normalization N² falls below the configured floor; the
/// superposition is (numerically) the null vector.
class DegenerateCat : public Error {
public:
  DegenerateCat(double alpha_abs, double phi, double norm_squared);
  double alpha_abs() const noexcept { return alpha_abs_; }
  double phi() const noexcept { return phi_; }
  double norm_squared() const noexcept { return norm_squared_; }

private:
  double alpha_abs_;
  double phi_;
  double norm_squared_;
};

/// The general time-averaged inversion is only established for real,
/// non-negative initial amplitudes.
class ComplexAmplitudes : public Error {
public:
  using Error::Error;
};

/// Adaptive integrator could not meet its tolerance.
class StepFailure : public Error {
public:
  using Error::Error;
};

/// Malformed grid, field spec or parameter.
class InvalidInput : public Error {
public:
  using Error::Error;
};

} // namespace cavityline
