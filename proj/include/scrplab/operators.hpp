// SPDX-License-Identifier: Apache-2.0
//
// Dense operator construction over a truncated multi-transmon Fock space.
//
// Index convention: transmon 0 is the least-significant digit of the composite
// Fock index, i.e. |n_0, n_1, ..., n_{N-1}> maps to index sum_q n_q * levels^q.
#pragma once

#include <vector>

#include "scrplab/common.hpp"
#include "scrplab/device.hpp"

namespace scrplab {

/// Truncated lowering operator with standard sqrt(n) matrix elements.
Matrix destroy_op(int levels);

/// Number operator diag(0, 1, ..., levels-1).
Matrix number_op(int levels);

/// Kronecker product with `b` as the least-significant (fastest-varying) factor,
/// matching the transmon-0-least-significant index convention: kron_lsf(a, b)
/// acts as a on the more significant subsystem and b on the less significant one.
Matrix kron_lsf(const Matrix& a, const Matrix& b);

/// Embed a single-transmon operator at `site`, identity elsewhere.
Matrix embed_site(const DeviceConfig& device, int site, const Matrix& op);

/// Fock indices of the 2^N computational basis states ordered by the little-endian
/// qubit label (bit q of the label = excitation of transmon q).
std::vector<long> computational_indices(const DeviceConfig& device);

/// Extract the computational block rows/cols of a full Fock-space matrix (raw, not unitary).
Matrix computational_block(const Matrix& full, const std::vector<long>& comp);

/// Nearest unitary to `m` (polar decomposition via SVD).
Matrix polar_unitary(const Matrix& m);

}  // namespace scrplab
