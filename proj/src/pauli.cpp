// SPDX-License-Identifier: Apache-2.0

#include "scrplab/pauli.hpp"

namespace scrplab {

Matrix pauli_1q(char p) {
  Matrix m(2, 2);
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw ValidationError(std::string("unknown Pauli character '") + p + "'");
  }
  return m;
}

Matrix pauli_matrix(const std::string& label) {
  if (label.empty()) throw ValidationError("empty Pauli label");
  // Left-most label character = qubit 0 = least-significant bit, so it is the
  // last Kronecker factor.
  Matrix out = Matrix::Identity(1, 1);
  for (auto it = label.rbegin(); it != label.rend(); ++it) {
    const Matrix p = pauli_1q(*it);
    Matrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) {
        next.block(i * 2, j * 2, 2, 2) = out(i, j) * p;
      }
    }
    out = next;
  }
  return out;
}

std::vector<std::string> pauli_labels(int n) {
  static const char kChars[] = {'I', 'X', 'Y', 'Z'};
  std::vector<std::string> labels(1, "");
  for (int q = 0; q < n; ++q) {
    std::vector<std::string> next;
    next.reserve(labels.size() * 4);
    for (const auto& base : labels) {
      for (char c : kChars) next.push_back(base + c);
    }
    labels = std::move(next);
  }
  return labels;
}

Complex pauli_coefficient(const std::string& label, const Matrix& op) {
  const Matrix p = pauli_matrix(label);
  if (p.rows() != op.rows()) throw ValidationError("pauli_coefficient: dimension mismatch");
  return (p * op).trace() / static_cast<double>(op.rows());
}

std::map<std::string, Complex> pauli_decompose(const Matrix& op) {
  int n = 0;
  while ((1L << n) < op.rows()) ++n;
  if ((1L << n) != op.rows()) throw ValidationError("pauli_decompose: dimension not a power of 2");
  std::map<std::string, Complex> out;
  for (const auto& label : pauli_labels(n)) out[label] = pauli_coefficient(label, op);
  return out;
}

}  // namespace scrplab
