// SPDX-License-Identifier: Apache-2.0
//
// Closed-form weak-drive rates of the simultaneous cross-resonance triplet and
// numerical effective-Hamiltonian extraction from propagated or diagonalized models.
//
// Rate convention: a Hamiltonian term (omega_P / 2) * P has rate omega_P, i.e.
// omega_P = 2 * (Pauli coefficient of the effective Hamiltonian).
#pragma once

#include <map>
#include <string>
#include <vector>

#include "scrplab/common.hpp"
#include "scrplab/device.hpp"

namespace scrplab {

/// Leading-order rates (rad/s) for the (c1, t, c2) triplet.
struct EffectiveRates {
  double zzi = 0.0;  ///< static, zeroth order in drives
  double izz = 0.0;  ///< static, zeroth order in drives
  double zxi = 0.0;  ///< linear in the c1 drive
  double ixz = 0.0;  ///< linear in the c2 drive
  double ixi = 0.0;  ///< direct target drive plus both crosstalk paths
};

/// Evaluate the closed-form rates at the given drive amplitudes (rad/s). Throws a
/// NumericalError naming the vanishing denominator near any perturbative resonance.
EffectiveRates perturbative_rates(const DeviceConfig& device, double omega_c1, double omega_c2,
                                  double omega_t);

/// Pauli coefficients of i*log(u)/t_div together with how much of `u` lived outside
/// the controls-diagonal block structure before projection.
struct ExtractedHamiltonian {
  std::map<std::string, Complex> coefficients;  ///< of the effective Hamiltonian, rad/s
  double off_block_residual = 0.0;              ///< ||off-block part||_F / ||u||_F

  /// Rate of one Pauli term, omega_P = 2 * Re(coefficient).
  double rate(const std::string& label) const;
};

/// Reconstruct the effective Hamiltonian of a qubit-subspace propagator over gate time
/// t_g: project onto the blocks diagonal in the `control_qubits` computational basis
/// (re-unitarizing by polar decomposition), take the principal matrix log, and return
/// Pauli coefficients of i*log(u)/t_div. t_div defaults to t_g; an optional doubled
/// divisor matches conventions that count both echo segments separately.
///
/// Throws ValidationError when more than 1e-3 of `u` (Frobenius) connects different
/// control blocks, and NumericalError when any eigenphase lies within 1e-3 rad of
/// +-pi (the log branch is then ambiguous and rates are not identifiable).
ExtractedHamiltonian extract_effective_hamiltonian(const Matrix& u, double t_g,
                                                   const std::vector<int>& control_qubits = {0, 2},
                                                   bool double_gate_divisor = false);

/// Effective rates measured from time evolution: propagate one flat-top pulse per
/// flat duration {flat_a, flat_b}, project onto the dressed qubit block, remove bare
/// detuning phases, and difference the accumulated phase matrices so that edge
/// transients cancel. Rates are omega_P = 2 * coefficient.
struct TimeDomainConfig {
  double flat_a = 60e-9;      ///< s
  double flat_b = 180e-9;     ///< s
  double rise_sigma = 4e-9;   ///< s
  double dt = 1e-11;          ///< s
};

struct RateTable {
  std::map<std::string, double> omega;  ///< rad/s per 3-letter Pauli label
  double off_block_residual = 0.0;
};

RateTable extract_rates_time_domain(const DeviceConfig& device, double omega_c1, double omega_c2,
                                    double omega_t, const TimeDomainConfig& config = {});

/// Effective rates of the continuous-wave model: diagonalize the driven rotating-frame
/// Hamiltonian exactly, match eigenvectors to bare states, and read the block
/// Hamiltonian directly (no time propagation, exact at any amplitude).
RateTable extract_rates_spectral(const DeviceConfig& device, double omega_c1, double omega_c2,
                                 double omega_t);

/// One row of a cross-drive amplitude scan.
struct ScanRow {
  double omega_c1 = 0.0;  ///< rad/s
  double omega_c2 = 0.0;  ///< rad/s
  double zxi = 0.0;
  double ixz = 0.0;
  double zxz = 0.0;
  double ixi = 0.0;
};

/// Spectrally extracted rates on the outer product of the two amplitude grids (rad/s).
std::vector<ScanRow> cross_drive_scan(const DeviceConfig& device,
                                      const std::vector<double>& c1_grid,
                                      const std::vector<double>& c2_grid);

/// Least-squares slope of log|y| against log(x); pairs with y = 0 are rejected.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace scrplab
