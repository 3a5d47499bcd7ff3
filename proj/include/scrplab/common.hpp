// SPDX-License-Identifier: Apache-2.0
//
// Shared numeric types, constants, and error categories.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace scrplab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Raised when an input violates a documented precondition or invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical guarantee cannot be met (drift, resonance, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// GHz -> rad/s.
inline double ghz_to_rad(double f_ghz) { return kTwoPi * f_ghz * 1e9; }
/// MHz -> rad/s.
inline double mhz_to_rad(double f_mhz) { return kTwoPi * f_mhz * 1e6; }
/// µs -> s.
inline double us_to_s(double t_us) { return t_us * 1e-6; }

}  // namespace scrplab
