// SPDX-License-Identifier: Apache-2.0
//
// Pauli-transfer-matrix machinery, the amplitude-phase damping channel, average
// gate fidelity, and the coherence limit of a gate on relaxing qubits.
//
// A Pauli transfer matrix (PTM) represents a channel Lambda as the real matrix
//   S_{PQ} = Tr(P Lambda(Q)) / 2^n
// over the n-qubit Pauli basis in lexicographic label order (I < X < Y < Z,
// left label character = qubit 0).  With this normalization the identity
// channel is the identity matrix, composition is matrix multiplication, and
// unitary channels give orthogonal matrices.

#pragma once

#include <utility>
#include <vector>

#include "scrplab/operators.hpp"

namespace scrplab {

/// Real PTM of an n-qubit channel in the lexicographic Pauli basis.
struct PauliTransferMatrix {
  int n_qubits = 0;
  Eigen::MatrixXd data;  ///< 4^n x 4^n, rows/cols indexed by pauli_labels(n).
};

/// One-qubit amplitude-phase damping channel for an idle interval of length t:
/// X and Y components decay as exp(-t/t2), Z as exp(-t/t1), and population
/// relaxes toward the ground state through the (Z, I) entry 1 - exp(-t/t1).
/// Requires t >= 0 and 0 < t2 <= 2 t1.
PauliTransferMatrix damping_ptm(double t, double t1, double t2);

/// Kraus operators realizing the same channel as damping_ptm (amplitude
/// damping composed with pure dephasing).
std::vector<Matrix> damping_kraus(double t, double t1, double t2);

/// PTM of a channel given its Kraus operators (all square, matching dims).
PauliTransferMatrix ptm_of_kraus(const std::vector<Matrix>& kraus);

/// PTM of the unitary channel rho -> u rho u^dagger.
PauliTransferMatrix ptm_of_unitary(const Matrix& u);

/// Tensor product of two channels; `a` covers the lower-indexed qubits.
PauliTransferMatrix ptm_tensor(const PauliTransferMatrix& a, const PauliTransferMatrix& b);

/// Average gate fidelity between a channel and a target unitary:
/// F_pro = Tr(S_target^T S_channel) / d^2, F_avg = (d F_pro + 1) / (d + 1).
double average_gate_fidelity(const PauliTransferMatrix& channel, const Matrix& target);

/// Coherence limit of a gate of the given length on independently relaxing
/// qubits: (d/(d+1)) * (1 - prod_q Tr[S_q]/4) with d = 2^n and S_q the
/// per-qubit damping PTM.  Qubits are (t1, t2) pairs.
double coherence_limit(double gate_length, const std::vector<std::pair<double, double>>& qubits);

/// Applies a one-qubit channel (Kraus form) to qubit `qubit` of an n-qubit
/// density matrix (qubit 0 = least-significant bit) and returns the result.
Matrix apply_qubit_channel(const Matrix& rho, const std::vector<Matrix>& kraus, int qubit,
                           int n_qubits);

}  // namespace scrplab
