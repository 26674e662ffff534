// Shared aliases, dimension caps and the error taxonomy used across the library.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace vqtherm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kImag{0.0, 1.0};

// Hilbert-space dimension caps: matrix-free application vs. explicit dense
// superoperator assembly (stationary solves, exponential stepping).
inline constexpr int kMaxDim = 256;
inline constexpr int kMaxDenseDim = 64;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameters, malformed configs, unknown keys or names.  CLI exit 2.
struct ConfigError : Error {
  using Error::Error;
};

// A quantity was requested outside the machine regime where it is defined.
struct RegimeError : ConfigError {
  using ConfigError::ConfigError;
};

// Numerical-guard breaches: step-size guard, dimension caps.  CLI exit 3.
struct GuardError : Error {
  using Error::Error;
};

}  // namespace vqtherm
