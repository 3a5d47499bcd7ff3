// SPDX-License-Identifier: Apache-2.0

#include "scrplab/operators.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace scrplab {

Matrix destroy_op(int levels) {
  Matrix a = Matrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix number_op(int levels) {
  Matrix n = Matrix::Zero(levels, levels);
  for (int k = 0; k < levels; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Matrix kron_lsf(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix embed_site(const DeviceConfig& device, int site, const Matrix& op) {
  const int n = device.num_transmons();
  if (site < 0 || site >= n) throw ValidationError("embed_site: site out of range");
  if (op.rows() != device.transmon(site).levels || op.cols() != op.rows()) {
    throw ValidationError("embed_site: operator dimension does not match transmon levels");
  }
  // Most-significant transmon first in the product; transmon 0 ends least significant.
  Matrix out = Matrix::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    const int d = device.transmon(q).levels;
    out = kron_lsf(out, q == site ? op : Matrix::Identity(d, d));
  }
  return out;
}

std::vector<long> computational_indices(const DeviceConfig& device) {
  const int n = device.num_transmons();
  std::vector<long> strides(static_cast<size_t>(n));
  long s = 1;
  for (int q = 0; q < n; ++q) {
    strides[static_cast<size_t>(q)] = s;
    s *= device.transmon(q).levels;
  }
  std::vector<long> comp;
  comp.reserve(1u << n);
  for (long label = 0; label < (1L << n); ++label) {
    long idx = 0;
    for (int q = 0; q < n; ++q) idx += ((label >> q) & 1L) * strides[static_cast<size_t>(q)];
    comp.push_back(idx);
  }
  return comp;
}

Matrix computational_block(const Matrix& full, const std::vector<long>& comp) {
  const auto m = static_cast<Eigen::Index>(comp.size());
  Matrix block(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      block(i, j) = full(comp[static_cast<size_t>(i)], comp[static_cast<size_t>(j)]);
    }
  }
  return block;
}

Matrix polar_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace scrplab
