// SPDX-License-Identifier: Apache-2.0
//
// Static, driven, and rotating-frame Hamiltonians of coupled Duffing oscillators,
// plus the static dressing used to project propagators onto calibrated qubits.
#pragma once

#include <vector>

#include "scrplab/common.hpp"
#include "scrplab/device.hpp"

namespace scrplab {

/// One always-on drive line in the common rotating frame.
struct DriveSpec {
  int target_transmon = 0;
  Complex amplitude{0.0, 0.0};  ///< rad/s; real part = X quadrature, imag = Y
  double carrier = 0.0;         ///< rad/s; all simultaneous drives share one carrier
};

/// H_s = sum_j (w_j n_j + (alpha_j/2) a_j^† a_j^† a_j a_j) + sum_jk J_jk (a_j^† a_k + h.c.)
Matrix build_static_hamiltonian(const DeviceConfig& device);

/// Rotating frame at the shared drive carrier: detunings replace frequencies and each
/// drive contributes (1/2)(conj(Omega) a + Omega a^†). Throws on mismatched carriers.
Matrix build_rotating_frame_hamiltonian(const DeviceConfig& device,
                                        const std::vector<DriveSpec>& drives);

/// Precomputed pieces for time-dependent propagation in a fixed rotating frame:
/// H(t) = h_static + sum_j Re(env_j(t)) * drive_x[j] + Im(env_j(t)) * drive_y[j].
struct RotatingFrame {
  double carrier = 0.0;
  Matrix h_static;
  std::vector<Matrix> drive_x;  ///< (a_j + a_j^†)/2 per transmon
  std::vector<Matrix> drive_y;  ///< i(a_j^† - a_j)/2 per transmon
};

RotatingFrame make_rotating_frame(const DeviceConfig& device, double carrier);

/// Static eigenbasis matched to bare Fock states by greedy max-overlap assignment,
/// with the sign of each eigenvector fixed so its bare component is positive.
/// `basis` columns are dressed states ordered by bare index; `energies[k]` is the
/// dressed energy assigned to bare state k (in the frame at `carrier`).
struct Dressing {
  Matrix basis;
  RealVector energies;
};

Dressing static_dressing(const DeviceConfig& device, double carrier);

/// Greedy max-overlap matching of an arbitrary Hermitian matrix's eigenvectors to the
/// bare basis (the assignment step of static_dressing, usable on driven Hamiltonians).
Dressing matched_eigenbasis(const Matrix& h);

/// Dressed transition frequency (rad/s, absolute) of `target`'s 0->1 transition with the
/// other transmons held in the given computational configuration (bit q of `config` =
/// excitation of transmon q; the target bit is ignored).
double dressed_transition_frequency(const DeviceConfig& device, int target, long config);

/// Control-averaged dressed target frequency: the mean of dressed_transition_frequency
/// over all computational configurations of `controls` (other spectators in the ground
/// state). Echoed sequences symmetrize the controls, so this is the carrier at which
/// the target accumulates no net idle phase.
double echo_frame_frequency(const DeviceConfig& device, int target,
                            const std::vector<int>& controls);

}  // namespace scrplab
