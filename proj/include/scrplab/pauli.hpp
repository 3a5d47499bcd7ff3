// SPDX-License-Identifier: Apache-2.0
//
// Pauli labels and matrices on the qubit subspace.
//
// Label convention: the left-most character of a label acts on qubit 0 (role c1),
// the middle on qubit 1 (role t), the right-most on qubit 2 (role c2); qubit 0 is
// the least-significant bit of basis-state indices.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "scrplab/common.hpp"

namespace scrplab {

/// The 2x2 Pauli matrix for 'I', 'X', 'Y', or 'Z'.
Matrix pauli_1q(char p);

/// Tensor-product Pauli matrix (dimension 2^len(label)) under the label convention above.
Matrix pauli_matrix(const std::string& label);

/// All 4^n labels for n qubits in lexicographic I<X<Y<Z per-site order, e.g. "III", "IIX", ...
std::vector<std::string> pauli_labels(int n);

/// Coefficient of `label` in the Pauli expansion of op: tr(P * op) / 2^n.
Complex pauli_coefficient(const std::string& label, const Matrix& op);

/// Full Pauli decomposition of a 2^n-dimensional operator.
std::map<std::string, Complex> pauli_decompose(const Matrix& op);

}  // namespace scrplab
