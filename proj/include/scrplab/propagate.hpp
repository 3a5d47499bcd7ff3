// SPDX-License-Identifier: Apache-2.0
//
// Fixed-step time-domain propagation of schedules in the shared rotating frame,
// and projection of full-space propagators onto the computational qubit subspace.
#pragma once

#include "scrplab/common.hpp"
#include "scrplab/device.hpp"
#include "scrplab/pulse.hpp"

namespace scrplab {

struct PropagationResult {
  Matrix unitary;        ///< re-unitarized propagator over the full Fock space
  double raw_drift = 0;  ///< Frobenius norm of (U^† U - 1) before re-unitarization
};

/// Integrate U' = -i H(t) U with classic fixed-step RK4, sampling envelopes at the
/// step endpoints and midpoint. Instantaneous ideal rotations are applied exactly at
/// their timestamps as dressed-basis single-qubit exponentials. Throws NumericalError
/// if the raw propagator drifts from unitarity by more than 1e-6; the returned
/// propagator is re-unitarized via polar decomposition and the raw drift reported.
PropagationResult propagate(const Schedule& schedule, const DeviceConfig& device,
                            double dt = 1e-11);

/// Reference integrator: per-step exact exponential of the midpoint-sampled
/// Hamiltonian. Slower but free of the RK4 truncation error; used as an oracle.
Matrix propagate_reference(const Schedule& schedule, const DeviceConfig& device, double dt);

struct SubspaceProjection {
  Matrix unitary;       ///< polar re-unitarized computational block
  double leakage = 0;   ///< 1 - ||raw block||_F^2 / 2^n
};

/// Project a full-space propagator onto the bare computational subspace.
SubspaceProjection project_to_qubit_subspace(const Matrix& u, const DeviceConfig& device);

/// Same, but in the dressed frame: the block is taken after rotating `u` into the
/// static eigenbasis `dressed_basis` (columns ordered by bare index).
SubspaceProjection project_to_qubit_subspace(const Matrix& u, const DeviceConfig& device,
                                             const Matrix& dressed_basis);

}  // namespace scrplab
