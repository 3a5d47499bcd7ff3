// SPDX-License-Identifier: Apache-2.0

#include "scrplab/channels.hpp"

#include <cmath>
#include <string>

#include "scrplab/pauli.hpp"

namespace scrplab {

namespace {

void check_damping_times(double t, double t1, double t2) {
  if (!(t >= 0.0)) throw ValidationError("damping interval must satisfy t >= 0");
  if (!(t1 > 0.0)) throw ValidationError("t1 must be positive");
  if (!(t2 > 0.0) || t2 > 2.0 * t1) throw ValidationError("t2 must satisfy 0 < t2 <= 2*t1");
}

int qubit_count_for_dim(Eigen::Index dim, const char* what) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw ValidationError(std::string(what) + ": dimension is not a power of 2");
  }
  return n;
}

}  // namespace

PauliTransferMatrix damping_ptm(double t, double t1, double t2) {
  check_damping_times(t, t1, t2);
  const double ex = std::exp(-t / t2);
  const double ez = std::exp(-t / t1);
  PauliTransferMatrix s;
  s.n_qubits = 1;
  s.data = Eigen::MatrixXd::Zero(4, 4);
  s.data(0, 0) = 1.0;
  s.data(1, 1) = ex;
  s.data(2, 2) = ex;
  s.data(3, 3) = ez;
  s.data(3, 0) = 1.0 - ez;
  return s;
}

std::vector<Matrix> damping_kraus(double t, double t1, double t2) {
  check_damping_times(t, t1, t2);
  const double gamma = 1.0 - std::exp(-t / t1);
  // exp(-t/t2) = exp(-t/(2 t1)) * (1 - 2p) fixes the pure-dephasing weight p.
  const double lambda = std::exp(-t / t2) / std::exp(-t / (2.0 * t1));
  const double p = 0.5 * (1.0 - lambda);

  Matrix relax0(2, 2), relax1(2, 2);
  relax0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
  relax1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
  const Matrix z = pauli_1q('Z');

  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p) * relax0);
  kraus.push_back(std::sqrt(1.0 - p) * relax1);
  if (p > 0.0) {
    kraus.push_back(std::sqrt(p) * Matrix(relax0 * z));
    kraus.push_back(std::sqrt(p) * Matrix(relax1 * z));
  }
  return kraus;
}

PauliTransferMatrix ptm_of_kraus(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw ValidationError("ptm_of_kraus: empty Kraus list");
  const Eigen::Index dim = kraus.front().rows();
  for (const auto& k : kraus) {
    if (k.rows() != dim || k.cols() != dim) {
      throw ValidationError("ptm_of_kraus: Kraus operators must be square with equal dims");
    }
  }
  const int n = qubit_count_for_dim(dim, "ptm_of_kraus");
  const auto labels = pauli_labels(n);
  std::vector<Matrix> basis;
  basis.reserve(labels.size());
  for (const auto& label : labels) basis.push_back(pauli_matrix(label));

  PauliTransferMatrix s;
  s.n_qubits = n;
  s.data = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()),
                                 static_cast<Eigen::Index>(labels.size()));
  for (size_t col = 0; col < labels.size(); ++col) {
    Matrix mapped = Matrix::Zero(dim, dim);
    for (const auto& k : kraus) mapped += k * basis[col] * k.adjoint();
    for (size_t row = 0; row < labels.size(); ++row) {
      s.data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          (basis[row] * mapped).trace().real() / static_cast<double>(dim);
    }
  }
  return s;
}

PauliTransferMatrix ptm_of_unitary(const Matrix& u) { return ptm_of_kraus({u}); }

PauliTransferMatrix ptm_tensor(const PauliTransferMatrix& a, const PauliTransferMatrix& b) {
  PauliTransferMatrix s;
  s.n_qubits = a.n_qubits + b.n_qubits;
  s.data = Eigen::MatrixXd(a.data.rows() * b.data.rows(), a.data.cols() * b.data.cols());
  for (Eigen::Index i = 0; i < a.data.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.data.cols(); ++j) {
      s.data.block(i * b.data.rows(), j * b.data.cols(), b.data.rows(), b.data.cols()) =
          a.data(i, j) * b.data;
    }
  }
  return s;
}

double average_gate_fidelity(const PauliTransferMatrix& channel, const Matrix& target) {
  const PauliTransferMatrix s_target = ptm_of_unitary(target);
  if (s_target.data.rows() != channel.data.rows()) {
    throw ValidationError("average_gate_fidelity: channel and target dimensions differ");
  }
  const double d = std::pow(2.0, channel.n_qubits);
  const double f_pro = (s_target.data.transpose() * channel.data).trace() / (d * d);
  return (d * f_pro + 1.0) / (d + 1.0);
}

double coherence_limit(double gate_length,
                       const std::vector<std::pair<double, double>>& qubits) {
  if (!(gate_length >= 0.0)) throw ValidationError("gate_length must satisfy >= 0");
  if (qubits.empty()) throw ValidationError("coherence_limit requires at least one qubit");
  double product = 1.0;
  for (const auto& [t1, t2] : qubits) {
    check_damping_times(gate_length, t1, t2);
    const double trace =
        1.0 + 2.0 * std::exp(-gate_length / t2) + std::exp(-gate_length / t1);
    product *= trace / 4.0;
  }
  const double d = std::pow(2.0, static_cast<double>(qubits.size()));
  return d / (d + 1.0) * (1.0 - product);
}

Matrix apply_qubit_channel(const Matrix& rho, const std::vector<Matrix>& kraus, int qubit,
                           int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (rho.rows() != dim || rho.cols() != dim) {
    throw ValidationError("apply_qubit_channel: density matrix dimension mismatch");
  }
  if (qubit < 0 || qubit >= n_qubits) {
    throw ValidationError("apply_qubit_channel: qubit index out of range");
  }
  const Eigen::Index mask = Eigen::Index{1} << qubit;

  Matrix out = Matrix::Zero(dim, dim);
  Matrix work(dim, dim);
  for (const auto& k : kraus) {
    if (k.rows() != 2 || k.cols() != 2) {
      throw ValidationError("apply_qubit_channel: Kraus operators must be 2x2");
    }
    // work = (K on bit `qubit`) * rho, applied by mixing row pairs.
    work = rho;
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r & mask) continue;
      for (Eigen::Index c = 0; c < dim; ++c) {
        const Complex lo = work(r, c), hi = work(r | mask, c);
        work(r, c) = k(0, 0) * lo + k(0, 1) * hi;
        work(r | mask, c) = k(1, 0) * lo + k(1, 1) * hi;
      }
    }
    // out += work * K^dagger, applied by mixing column pairs.
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (c & mask) continue;
      for (Eigen::Index r = 0; r < dim; ++r) {
        const Complex lo = work(r, c), hi = work(r, c | mask);
        out(r, c) += lo * std::conj(k(0, 0)) + hi * std::conj(k(0, 1));
        out(r, c | mask) += lo * std::conj(k(1, 0)) + hi * std::conj(k(1, 1));
      }
    }
  }
  return out;
}

}  // namespace scrplab
