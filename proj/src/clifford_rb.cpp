// SPDX-License-Identifier: Apache-2.0
#include "scrplab/clifford_rb.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "scrplab/channels.hpp"

namespace scrplab {

namespace {

// A Pauli word i^s * prod_q X_q^{x_q} Z_q^{z_q} with s tracked mod 4. The
// Hermitian word with Y = i X Z has s = popcount(x & z) (+2 for a minus sign).
struct PauliTerm {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  int s = 0;
};

PauliTerm term_multiply(const PauliTerm& a, const PauliTerm& b) {
  // Moving Z^{a.z} past X^{b.x} costs (-1) per overlapping qubit.
  return {a.x ^ b.x, a.z ^ b.z,
          (a.s + b.s + 2 * (std::popcount(a.z & b.x) & 1)) & 3};
}

int hermitian_phase(std::uint32_t x, std::uint32_t z) { return std::popcount(x & z) & 3; }

constexpr double kHalfPi = 1.5707963267948966;

}  // namespace

// ---------------------------------------------------------------------------
// CliffordTableau

CliffordTableau::CliffordTableau(int n_qubits) : n_(n_qubits) {
  if (n_ < 1 || n_ > 16) throw ValidationError("tableau qubit count must be between 1 and 16");
  rows_.resize(2 * static_cast<std::size_t>(n_));
  for (int q = 0; q < n_; ++q) {
    rows_[q].x = 1u << q;
    rows_[n_ + q].z = 1u << q;
  }
}

void CliffordTableau::check_qubit(int q) const {
  if (q < 0 || q >= n_) throw ValidationError("qubit index out of range for tableau");
}

bool CliffordTableau::x_bit(int row, int qubit) const {
  check_qubit(qubit);
  if (row < 0 || row >= 2 * n_) throw ValidationError("tableau row index out of range");
  return (rows_[row].x >> qubit) & 1u;
}

bool CliffordTableau::z_bit(int row, int qubit) const {
  check_qubit(qubit);
  if (row < 0 || row >= 2 * n_) throw ValidationError("tableau row index out of range");
  return (rows_[row].z >> qubit) & 1u;
}

bool CliffordTableau::phase_bit(int row) const {
  if (row < 0 || row >= 2 * n_) throw ValidationError("tableau row index out of range");
  return rows_[row].r;
}

bool CliffordTableau::is_identity() const {
  for (int q = 0; q < n_; ++q) {
    const std::uint32_t bit = 1u << q;
    if (rows_[q].x != bit || rows_[q].z != 0 || rows_[q].r) return false;
    if (rows_[n_ + q].x != 0 || rows_[n_ + q].z != bit || rows_[n_ + q].r) return false;
  }
  return true;
}

bool CliffordTableau::is_symplectic() const {
  const auto inner = [](const Row& a, const Row& b) {
    return (std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) & 1;
  };
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (inner(rows_[i], rows_[j]) != 0) return false;
      if (inner(rows_[n_ + i], rows_[n_ + j]) != 0) return false;
      if (inner(rows_[i], rows_[n_ + j]) != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

bool CliffordTableau::operator==(const CliffordTableau& other) const {
  if (n_ != other.n_) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].x != other.rows_[i].x || rows_[i].z != other.rows_[i].z ||
        rows_[i].r != other.rows_[i].r) {
      return false;
    }
  }
  return true;
}

void CliffordTableau::conj_h(int q) {
  const std::uint32_t bit = 1u << q;
  for (Row& row : rows_) {
    const bool x = row.x & bit, z = row.z & bit;
    row.r ^= x && z;
    row.x = (row.x & ~bit) | (z ? bit : 0u);
    row.z = (row.z & ~bit) | (x ? bit : 0u);
  }
}

void CliffordTableau::conj_s(int q) {
  const std::uint32_t bit = 1u << q;
  for (Row& row : rows_) {
    const bool x = row.x & bit, z = row.z & bit;
    row.r ^= x && z;
    if (x) row.z ^= bit;
  }
}

void CliffordTableau::conj_sdg(int q) {
  const std::uint32_t bit = 1u << q;
  for (Row& row : rows_) {
    const bool x = row.x & bit, z = row.z & bit;
    row.r ^= x && !z;
    if (x) row.z ^= bit;
  }
}

void CliffordTableau::conj_z(int q) {
  const std::uint32_t bit = 1u << q;
  for (Row& row : rows_) row.r ^= static_cast<bool>(row.x & bit);
}

void CliffordTableau::conj_x(int q) {
  const std::uint32_t bit = 1u << q;
  for (Row& row : rows_) row.r ^= static_cast<bool>(row.z & bit);
}

void CliffordTableau::conj_sx(int q) {
  const std::uint32_t bit = 1u << q;
  for (Row& row : rows_) {
    const bool x = row.x & bit, z = row.z & bit;
    row.r ^= z && !x;
    if (z) row.x ^= bit;
  }
}

void CliffordTableau::conj_sxdg(int q) {
  const std::uint32_t bit = 1u << q;
  for (Row& row : rows_) {
    const bool x = row.x & bit, z = row.z & bit;
    row.r ^= x && z;
    if (z) row.x ^= bit;
  }
}

void CliffordTableau::conj_cx(int c, int t) {
  const std::uint32_t cbit = 1u << c, tbit = 1u << t;
  for (Row& row : rows_) {
    const bool xc = row.x & cbit, zc = row.z & cbit;
    const bool xt = row.x & tbit, zt = row.z & tbit;
    row.r ^= xc && zt && (xt == zc);
    if (xc) row.x ^= tbit;
    if (zt) row.z ^= cbit;
  }
}

void CliffordTableau::apply_gate(const Gate& g) {
  const auto need_qubits = [&](std::size_t count) {
    if (g.qubits.size() != count) {
      throw ValidationError("gate '" + g.name + "' expects " + std::to_string(count) +
                            " qubit(s)");
    }
    for (int q : g.qubits) check_qubit(q);
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      for (std::size_t j = i + 1; j < g.qubits.size(); ++j) {
        if (g.qubits[i] == g.qubits[j]) {
          throw ValidationError("gate '" + g.name + "' qubits must be distinct");
        }
      }
    }
  };

  if (g.name == "BARRIER" || g.name == "DELAY") return;
  if (g.name == "RZ") {
    need_qubits(1);
    const double turns = g.param / kHalfPi;
    const long k = std::lround(turns);
    if (std::abs(g.param - static_cast<double>(k) * kHalfPi) > 1e-12) {
      throw ValidationError("RZ angle is not a multiple of pi/2; not a Clifford");
    }
    switch (((k % 4) + 4) % 4) {
      case 1: conj_s(g.qubits[0]); break;
      case 2: conj_z(g.qubits[0]); break;
      case 3: conj_sdg(g.qubits[0]); break;
      default: break;
    }
    return;
  }
  if (g.name == "SX") { need_qubits(1); conj_sx(g.qubits[0]); return; }
  if (g.name == "X") { need_qubits(1); conj_x(g.qubits[0]); return; }
  if (g.name == "H") { need_qubits(1); conj_h(g.qubits[0]); return; }
  if (g.name == "CX") { need_qubits(2); conj_cx(g.qubits[0], g.qubits[1]); return; }
  if (g.name == "ZPARITY") {
    need_qubits(3);
    conj_cx(g.qubits[0], g.qubits[1]);
    conj_cx(g.qubits[2], g.qubits[1]);
    return;
  }
  throw ValidationError("unknown gate name '" + g.name + "'");
}

CliffordTableau CliffordTableau::from_circuit(const Circuit& c) {
  CliffordTableau t(c.n_qubits);
  for (const Gate& g : c.gates) t.apply_gate(g);
  return t;
}

namespace {

// Pushes a Pauli word through a tableau's conjugation map using the tableau's
// generator images, multiplying in per-qubit X-before-Z order.
PauliTerm push_term(const CliffordTableau& t, const PauliTerm& in,
                    const std::function<PauliTerm(int, bool)>& row_term) {
  PauliTerm acc{0, 0, in.s};
  for (int q = 0; q < t.n(); ++q) {
    if ((in.x >> q) & 1u) acc = term_multiply(acc, row_term(q, false));
    if ((in.z >> q) & 1u) acc = term_multiply(acc, row_term(q, true));
  }
  return acc;
}

}  // namespace

CliffordTableau CliffordTableau::then(const CliffordTableau& second) const {
  if (n_ != second.n_) throw ValidationError("tableau sizes differ in composition");
  const auto row_term = [&second](int q, bool z_row) {
    const Row& row = second.rows_[z_row ? second.n_ + q : q];
    return PauliTerm{row.x, row.z, (hermitian_phase(row.x, row.z) + (row.r ? 2 : 0)) & 3};
  };
  CliffordTableau out(n_);
  for (int i = 0; i < 2 * n_; ++i) {
    const Row& row = rows_[i];
    const PauliTerm in{row.x, row.z, (hermitian_phase(row.x, row.z) + (row.r ? 2 : 0)) & 3};
    const PauliTerm res = push_term(second, in, row_term);
    const int delta = (res.s - hermitian_phase(res.x, res.z)) & 3;
    if (delta & 1) throw NumericalError("pauli sign tracking left the real axis");
    out.rows_[i] = Row{res.x, res.z, delta == 2};
  }
  return out;
}

CliffordTableau CliffordTableau::inverse() const {
  // Matrix part: symplectic inverse Omega M^T Omega, which swaps the X/Z
  // block-row and block-column roles.
  CliffordTableau inv(n_);
  for (int i = 0; i < 2 * n_; ++i) {
    Row row{0, 0, false};
    for (int j = 0; j < 2 * n_; ++j) {
      const Row& src = rows_[(j + n_) % (2 * n_)];
      const int col = (i + n_) % (2 * n_);
      const bool bit = col < n_ ? ((src.x >> col) & 1u) : ((src.z >> (col - n_)) & 1u);
      if (!bit) continue;
      if (j < n_) row.x |= 1u << j;
      else row.z |= 1u << (j - n_);
    }
    inv.rows_[i] = row;
  }
  // Sign part: composing the zero-sign inverse with *this leaves the identity
  // matrix with residual signs that depend linearly (coefficient one) on the
  // inverse's signs, so those residuals are exactly the signs needed.
  const CliffordTableau residual = inv.then(*this);
  for (int i = 0; i < 2 * n_; ++i) inv.rows_[i].r = residual.rows_[i].r;
  return inv;
}

std::pair<std::string, int> CliffordTableau::image(const std::string& pauli) const {
  if (static_cast<int>(pauli.size()) != n_) {
    throw ValidationError("pauli label length must match the tableau qubit count");
  }
  PauliTerm in;
  for (int q = 0; q < n_; ++q) {
    switch (pauli[q]) {
      case 'I': break;
      case 'X': in.x |= 1u << q; break;
      case 'Y': in.x |= 1u << q; in.z |= 1u << q; break;
      case 'Z': in.z |= 1u << q; break;
      default: throw ValidationError("pauli labels use characters I, X, Y, Z only");
    }
  }
  in.s = hermitian_phase(in.x, in.z);
  const auto row_term = [this](int q, bool z_row) {
    const Row& row = rows_[z_row ? n_ + q : q];
    return PauliTerm{row.x, row.z, (hermitian_phase(row.x, row.z) + (row.r ? 2 : 0)) & 3};
  };
  const PauliTerm res = push_term(*this, in, row_term);
  const int delta = (res.s - hermitian_phase(res.x, res.z)) & 3;
  if (delta & 1) throw NumericalError("pauli sign tracking left the real axis");
  std::string label(n_, 'I');
  for (int q = 0; q < n_; ++q) {
    const bool x = (res.x >> q) & 1u, z = (res.z >> q) & 1u;
    label[q] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return {label, delta == 2 ? -1 : 1};
}

// ---------------------------------------------------------------------------
// Uniform sampling

CliffordTableau sample_uniform_clifford(std::uint64_t seed, int n_qubits) {
  CliffordTableau t(n_qubits);
  const int n = n_qubits;
  std::mt19937_64 rng(seed);
  const std::uint32_t mask = (n == 32) ? ~0u : ((1u << n) - 1u);

  struct Vec {
    std::uint32_t x = 0, z = 0;
  };
  const auto inner = [](const Vec& a, const Vec& b) {
    return (std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) & 1;
  };
  std::vector<Vec> a(n), b(n);

  const auto draw = [&]() {
    const std::uint64_t bits = rng();
    return Vec{static_cast<std::uint32_t>(bits) & mask,
               static_cast<std::uint32_t>(bits >> 32) & mask};
  };
  // Projects onto the symplectic complement of the pairs chosen so far.
  const auto project = [&](Vec v, int pairs) {
    for (int i = 0; i < pairs; ++i) {
      if (inner(v, b[i])) { v.x ^= a[i].x; v.z ^= a[i].z; }
      if (inner(v, a[i])) { v.x ^= b[i].x; v.z ^= b[i].z; }
    }
    return v;
  };

  for (int j = 0; j < n; ++j) {
    for (;;) {
      const Vec v = project(draw(), j);
      if (v.x | v.z) { a[j] = v; break; }
    }
    for (;;) {
      const Vec v = project(draw(), j);
      if (inner(a[j], v)) { b[j] = v; break; }
    }
  }
  for (int j = 0; j < n; ++j) {
    t.rows_[j].x = a[j].x;
    t.rows_[j].z = a[j].z;
    t.rows_[n + j].x = b[j].x;
    t.rows_[n + j].z = b[j].z;
  }
  const std::uint64_t signs = rng();
  for (int i = 0; i < 2 * n; ++i) t.rows_[i].r = (signs >> i) & 1u;
  return t;
}

// ---------------------------------------------------------------------------
// Synthesis

namespace {

enum class OpKind { H, S, Z, X, SX, CX, SWAP };

struct Op {
  OpKind kind;
  int a = 0;
  int b = 0;
};

void emit_inverse(const Op& op, std::vector<Gate>& gates) {
  switch (op.kind) {
    case OpKind::H:
      gates.push_back({"RZ", {op.a}, kHalfPi});
      gates.push_back({"SX", {op.a}});
      gates.push_back({"RZ", {op.a}, kHalfPi});
      break;
    case OpKind::S:
      gates.push_back({"RZ", {op.a}, -kHalfPi});
      break;
    case OpKind::Z:
      gates.push_back({"RZ", {op.a}, 2.0 * kHalfPi});
      break;
    case OpKind::X:
      gates.push_back({"SX", {op.a}});
      gates.push_back({"SX", {op.a}});
      break;
    case OpKind::SX:
      gates.push_back({"RZ", {op.a}, 2.0 * kHalfPi});
      gates.push_back({"SX", {op.a}});
      gates.push_back({"RZ", {op.a}, 2.0 * kHalfPi});
      break;
    case OpKind::CX:
      gates.push_back({"CX", {op.a, op.b}});
      break;
    case OpKind::SWAP:
      gates.push_back({"CX", {op.a, op.b}});
      gates.push_back({"CX", {op.b, op.a}});
      gates.push_back({"CX", {op.a, op.b}});
      break;
  }
}

}  // namespace

Circuit decompose_clifford(const CliffordTableau& t) {
  CliffordTableau w = t;
  const int n = w.n();
  std::vector<Op> ops;
  const auto apply = [&](OpKind kind, int a, int b = 0) {
    ops.push_back({kind, a, b});
    switch (kind) {
      case OpKind::H: w.conj_h(a); break;
      case OpKind::S: w.conj_s(a); break;
      case OpKind::Z: w.conj_z(a); break;
      case OpKind::X: w.conj_x(a); break;
      case OpKind::SX: w.conj_sx(a); break;
      case OpKind::CX: w.conj_cx(a, b); break;
      case OpKind::SWAP:
        w.conj_cx(a, b);
        w.conj_cx(b, a);
        w.conj_cx(a, b);
        break;
    }
  };

  for (int q = 0; q < n; ++q) {
    // Pivot: bring an X contribution of the X_q image onto qubit q.
    {
      int px = -1, pz = -1;
      for (int j = q; j < n && px < 0; ++j) {
        if (w.x_bit(q, j)) px = j;
      }
      if (px < 0) {
        for (int j = q; j < n && pz < 0; ++j) {
          if (w.z_bit(q, j)) pz = j;
        }
        apply(OpKind::H, pz);
        px = pz;
      }
      if (px != q) apply(OpKind::SWAP, q, px);
    }
    // Clear the remaining X bits of the X_q image.
    for (int j = q + 1; j < n; ++j) {
      if (w.x_bit(q, j)) apply(OpKind::CX, q, j);
    }
    // Clear its Z bits (through Y on the pivot when needed).
    {
      bool any_z = false;
      for (int j = q; j < n; ++j) any_z = any_z || w.z_bit(q, j);
      if (any_z) {
        if (!w.z_bit(q, q)) apply(OpKind::S, q);
        for (int j = q + 1; j < n; ++j) {
          if (w.z_bit(q, j)) apply(OpKind::CX, j, q);
        }
        apply(OpKind::S, q);
      }
    }
    // Reduce the Z_q image to Z_q: turn X support into Z support, fold it
    // onto the pivot, and fix a leftover Y on the pivot with SX.
    for (int j = q + 1; j < n; ++j) {
      if (w.x_bit(n + q, j)) {
        if (w.z_bit(n + q, j)) apply(OpKind::S, j);
        apply(OpKind::H, j);
      }
    }
    for (int j = q + 1; j < n; ++j) {
      if (w.z_bit(n + q, j)) apply(OpKind::CX, j, q);
    }
    if (w.x_bit(n + q, q)) apply(OpKind::SX, q);
  }
  for (int q = 0; q < n; ++q) {
    if (w.phase_bit(q)) apply(OpKind::Z, q);
    if (w.phase_bit(n + q)) apply(OpKind::X, q);
  }
  if (!w.is_identity()) throw NumericalError("clifford synthesis failed to reach the identity");

  Circuit out{n, {}};
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) emit_inverse(*it, out.gates);
  return out;
}

// ---------------------------------------------------------------------------
// Routing

Circuit route_to_line(const Circuit& c, const std::array<int, 3>& line) {
  const auto [i, j, k] = line;
  if (i == j || j == k || i == k) throw ValidationError("routing line qubits must be distinct");
  for (int q : line) {
    if (q < 0 || q >= c.n_qubits) throw ValidationError("routing line qubit out of range");
  }
  Circuit out{c.n_qubits, {}};
  for (const Gate& g : c.gates) {
    for (int q : g.qubits) {
      if (q != i && q != j && q != k) {
        throw ValidationError("gate '" + g.name + "' touches a qubit outside the routing line");
      }
    }
    if (g.name == "CX" && ((g.qubits[0] == i && g.qubits[1] == k) ||
                           (g.qubits[0] == k && g.qubits[1] == i))) {
      const int c0 = g.qubits[0], t0 = g.qubits[1];
      out.gates.push_back({"CX", {j, t0}});
      out.gates.push_back({"CX", {c0, j}});
      out.gates.push_back({"CX", {j, t0}});
      out.gates.push_back({"CX", {c0, j}});
    } else {
      out.gates.push_back(g);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unitaries

namespace {

Matrix embed_1q(const Matrix& u, int qubit, int n) {
  const long dim = 1L << n;
  Matrix full = Matrix::Zero(dim, dim);
  const long bit = 1L << qubit;
  for (long base = 0; base < dim; ++base) {
    if (base & bit) continue;
    full(base, base) = u(0, 0);
    full(base, base | bit) = u(0, 1);
    full(base | bit, base) = u(1, 0);
    full(base | bit, base | bit) = u(1, 1);
  }
  return full;
}

}  // namespace

Matrix gate_unitary(const Gate& g, int n_qubits) {
  const long dim = 1L << n_qubits;
  for (int q : g.qubits) {
    if (q < 0 || q >= n_qubits) throw ValidationError("gate qubit out of range");
  }
  if (g.name == "BARRIER" || g.name == "DELAY") return Matrix::Identity(dim, dim);
  if (g.name == "RZ") {
    Matrix u(2, 2);
    u << std::exp(Complex(0.0, -g.param / 2.0)), 0.0, 0.0, std::exp(Complex(0.0, g.param / 2.0));
    return embed_1q(u, g.qubits.at(0), n_qubits);
  }
  if (g.name == "SX") {
    Matrix u(2, 2);
    u << Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5);
    return embed_1q(u, g.qubits.at(0), n_qubits);
  }
  if (g.name == "X") {
    Matrix u(2, 2);
    u << 0.0, 1.0, 1.0, 0.0;
    return embed_1q(u, g.qubits.at(0), n_qubits);
  }
  if (g.name == "H") {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix u(2, 2);
    u << s, s, s, -s;
    return embed_1q(u, g.qubits.at(0), n_qubits);
  }
  if (g.name == "CX") {
    const long cbit = 1L << g.qubits.at(0), tbit = 1L << g.qubits.at(1);
    Matrix full = Matrix::Zero(dim, dim);
    for (long from = 0; from < dim; ++from) {
      const long to = (from & cbit) ? (from ^ tbit) : from;
      full(to, from) = 1.0;
    }
    return full;
  }
  if (g.name == "ZPARITY") {
    const long c1 = 1L << g.qubits.at(0), t = 1L << g.qubits.at(1), c2 = 1L << g.qubits.at(2);
    Matrix full = Matrix::Zero(dim, dim);
    for (long from = 0; from < dim; ++from) {
      long to = from;
      if (from & c1) to ^= t;
      if (from & c2) to ^= t;
      full(to, from) = 1.0;
    }
    return full;
  }
  if (g.name == "Z") {
    Matrix u(2, 2);
    u << 1.0, 0.0, 0.0, -1.0;
    return embed_1q(u, g.qubits.at(0), n_qubits);
  }
  if (g.name == "SWAP") {
    const long abit = 1L << g.qubits.at(0), bbit = 1L << g.qubits.at(1);
    Matrix full = Matrix::Zero(dim, dim);
    for (long from = 0; from < dim; ++from) {
      const bool a = (from & abit) != 0, b = (from & bbit) != 0;
      const long to = (a != b) ? (from ^ abit ^ bbit) : from;
      full(to, from) = 1.0;
    }
    return full;
  }
  throw ValidationError("unknown gate name '" + g.name + "'");
}

Matrix circuit_unitary(const Circuit& c) {
  const long dim = 1L << c.n_qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : c.gates) u = gate_unitary(g, c.n_qubits) * u;
  return u;
}

// ---------------------------------------------------------------------------
// Sequence construction

std::vector<RbCircuit> build_irb_circuits(const std::vector<int>& lengths, int samples_per_length,
                                          const std::optional<Circuit>& interleave,
                                          const std::array<int, 3>& line, std::uint64_t seed) {
  if (lengths.empty()) throw ValidationError("at least one sequence length is required");
  for (int m : lengths) {
    if (m < 1) throw ValidationError("sequence lengths must be positive");
  }
  if (samples_per_length < 1) throw ValidationError("samples per length must be positive");

  std::optional<CliffordTableau> interleave_tableau;
  std::optional<Circuit> interleave_routed;
  if (interleave && !interleave->gates.empty()) {
    interleave_tableau = CliffordTableau::from_circuit(*interleave);
    interleave_routed = route_to_line(*interleave, line);
  }

  std::vector<RbCircuit> out;
  out.reserve(lengths.size() * static_cast<std::size_t>(samples_per_length));
  for (const int m : lengths) {
    for (int s = 0; s < samples_per_length; ++s) {
      std::mt19937_64 rng(seed + 1000003ULL * static_cast<std::uint64_t>(m) +
                          static_cast<std::uint64_t>(s));
      Circuit circ{3, {}};
      CliffordTableau composite(3);
      for (int c = 0; c < m; ++c) {
        const CliffordTableau t = sample_uniform_clifford(rng(), 3);
        const Circuit routed = route_to_line(decompose_clifford(t), line);
        circ.gates.insert(circ.gates.end(), routed.gates.begin(), routed.gates.end());
        circ.gates.push_back({"BARRIER", {}});
        composite = composite.then(t);
        if (interleave_tableau) {
          circ.gates.insert(circ.gates.end(), interleave_routed->gates.begin(),
                            interleave_routed->gates.end());
          circ.gates.push_back({"BARRIER", {}});
          composite = composite.then(*interleave_tableau);
        }
      }
      const CliffordTableau inv = composite.inverse();
      if (!composite.then(inv).is_identity()) {
        throw NumericalError("sequence inversion failed to close to the identity");
      }
      const Circuit routed_inv = route_to_line(decompose_clifford(inv), line);
      circ.gates.insert(circ.gates.end(), routed_inv.gates.begin(), routed_inv.gates.end());
      circ.gates.push_back({"BARRIER", {}});
      out.push_back({m, s, std::move(circ)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Execution and fitting

namespace {

struct DecayFit {
  double amplitude = 0.0;
  double decay = 1.0;
  double baseline = 0.0;
  double decay_stderr = 0.0;
};

struct LinearSolution {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
};

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Best amplitude/baseline in [0,1]^2 for fixed decay, by least squares with
// the box handled through boundary candidates.
LinearSolution solve_amplitudes(const std::vector<int>& ms, const std::vector<double>& ys,
                                double alpha) {
  const std::size_t npts = ms.size();
  std::vector<double> xs(npts);
  for (std::size_t i = 0; i < npts; ++i) xs[i] = std::pow(alpha, ms[i]);
  double sxx = 0, sx = 0, sxy = 0, sy = 0;
  for (std::size_t i = 0; i < npts; ++i) {
    sxx += xs[i] * xs[i];
    sx += xs[i];
    sxy += xs[i] * ys[i];
    sy += ys[i];
  }
  const double sn = static_cast<double>(npts);
  const auto residual_of = [&](double a, double b) {
    double r = 0;
    for (std::size_t i = 0; i < npts; ++i) {
      const double d = a * xs[i] + b - ys[i];
      r += d * d;
    }
    return r;
  };

  std::vector<LinearSolution> candidates;
  const double det = sxx * sn - sx * sx;
  if (det > 1e-12 * std::max(1.0, sxx * sn)) {
    const double a = (sn * sxy - sx * sy) / det;
    const double b = (sxx * sy - sx * sxy) / det;
    if (a >= 0 && a <= 1 && b >= 0 && b <= 1) return {a, b, residual_of(a, b)};
  } else {
    // Constant column: split the mean between amplitude and baseline.
    const double mean = sy / sn;
    const double a = clamp01(mean - 0.125);
    const double b = clamp01(mean - a);
    candidates.push_back({a, b, residual_of(a, b)});
  }
  for (const double a : {0.0, 1.0}) {
    const double b = clamp01((sy - a * sx) / sn);
    candidates.push_back({a, b, residual_of(a, b)});
  }
  if (sxx > 0) {
    for (const double b : {0.0, 1.0}) {
      const double a = clamp01((sxy - b * sx) / sxx);
      candidates.push_back({a, b, residual_of(a, b)});
    }
  }
  LinearSolution best = candidates.front();
  for (const LinearSolution& c : candidates) {
    if (c.residual < best.residual) best = c;
  }
  return best;
}

DecayFit fit_decay(const std::vector<int>& ms, const std::vector<double>& ys) {
  // Grid scan with ties broken toward the larger decay (so noiseless data
  // lands on decay 1), then golden-section refinement around the best cell.
  double best_alpha = 0.0;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) {
    const double alpha = i / 1000.0;
    const double r = solve_amplitudes(ms, ys, alpha).residual;
    if (r < best_residual - 1e-15 || (r <= best_residual + 1e-15 && alpha > best_alpha)) {
      best_residual = r;
      best_alpha = alpha;
    }
  }
  double lo = std::max(0.0, best_alpha - 2e-3);
  double hi = std::min(1.0, best_alpha + 2e-3);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = solve_amplitudes(ms, ys, c).residual;
  double fd = solve_amplitudes(ms, ys, d).residual;
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      hi = d; d = c; fd = fc;
      c = hi - gr * (hi - lo);
      fc = solve_amplitudes(ms, ys, c).residual;
    } else {
      lo = c; c = d; fc = fd;
      d = lo + gr * (hi - lo);
      fd = solve_amplitudes(ms, ys, d).residual;
    }
  }
  double alpha = 0.5 * (lo + hi);
  double residual = solve_amplitudes(ms, ys, alpha).residual;
  // Keep exact ties (flat plateaus) on the larger decay, including 1 itself.
  for (const double cand : {best_alpha, 1.0}) {
    const double r = solve_amplitudes(ms, ys, cand).residual;
    if (r < residual - 1e-15 || (r <= residual + 1e-15 && cand > alpha)) {
      alpha = cand;
      residual = r;
    }
  }

  const LinearSolution amps = solve_amplitudes(ms, ys, alpha);
  DecayFit fit{amps.a, alpha, amps.b, 0.0};

  const std::size_t npts = ms.size();
  if (npts > 3 && amps.residual > 0) {
    Eigen::MatrixXd jac(npts, 3);
    for (std::size_t i = 0; i < npts; ++i) {
      const double m = ms[i];
      jac(i, 0) = std::pow(alpha, m);
      jac(i, 1) = alpha > 0 ? amps.a * m * std::pow(alpha, m - 1) : 0.0;
      jac(i, 2) = 1.0;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    if (lu.isInvertible()) {
      const double s2 = amps.residual / static_cast<double>(npts - 3);
      const Eigen::MatrixXd cov = lu.inverse() * s2;
      fit.decay_stderr = std::sqrt(std::max(0.0, cov(1, 1)));
    }
  }
  return fit;
}

int qubit_count_of_dim(long dim) {
  int n = 0;
  while ((1L << n) < dim) ++n;
  if ((1L << n) != dim) throw ValidationError("density matrix dimension is not a power of two");
  return n;
}

}  // namespace

RBResult run_rb(const std::vector<RbCircuit>& circuits, const GateExecutor& executor,
                int shots, std::uint64_t seed) {
  if (circuits.empty()) throw ValidationError("no benchmarking circuits supplied");
  const int n = circuits.front().circuit.n_qubits;
  const long dim = 1L << n;

  std::map<int, std::vector<double>> by_length;
  for (std::size_t idx = 0; idx < circuits.size(); ++idx) {
    const RbCircuit& rb = circuits[idx];
    if (rb.circuit.n_qubits != n) {
      throw ValidationError("benchmarking circuits must share one qubit count");
    }
    Matrix rho = Matrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    for (const Gate& g : rb.circuit.gates) executor(rho, g);
    double p = clamp01(rho(0, 0).real());
    if (shots > 0) {
      std::mt19937_64 rng(seed + 7919ULL * (idx + 1));
      std::binomial_distribution<int> dist(shots, p);
      p = static_cast<double>(dist(rng)) / static_cast<double>(shots);
    }
    by_length[rb.length].push_back(p);
  }
  if (by_length.size() < 2) {
    throw ValidationError("the decay fit needs at least two distinct sequence lengths");
  }

  RBResult out;
  out.n_qubits = n;
  for (const auto& [m, vals] : by_length) {
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    const double sd = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
    out.lengths.push_back(m);
    out.mean_survival.push_back(mean);
    out.std_survival.push_back(sd);
    out.survivals.push_back(vals);
  }

  const DecayFit fit = fit_decay(out.lengths, out.mean_survival);
  out.amplitude = fit.amplitude;
  out.decay = fit.decay;
  out.baseline = fit.baseline;
  out.decay_stderr = fit.decay_stderr;
  const double d = static_cast<double>(dim);
  out.error_per_clifford = (d - 1.0) / d * (1.0 - out.decay);
  out.error_per_clifford_stderr = (d - 1.0) / d * out.decay_stderr;
  return out;
}

EpgEstimate interleaved_epg(const RBResult& reference, const RBResult& interleaved) {
  if (reference.n_qubits != interleaved.n_qubits) {
    throw ValidationError("reference and interleaved runs must share one qubit count");
  }
  if (reference.decay <= 0) {
    throw ValidationError("reference decay vanished; the interleaved ratio is undefined");
  }
  const double d = static_cast<double>(1L << reference.n_qubits);
  const double ratio = interleaved.decay / reference.decay;
  EpgEstimate out;
  out.value = (d - 1.0) / d * (1.0 - ratio);
  const double var = std::pow(interleaved.decay_stderr / reference.decay, 2) +
                     std::pow(interleaved.decay * reference.decay_stderr /
                                  (reference.decay * reference.decay),
                              2);
  out.uncertainty = (d - 1.0) / d * std::sqrt(var);
  return out;
}

// ---------------------------------------------------------------------------
// Executors

std::map<std::string, double> default_gate_durations() {
  return {{"RZ", 0.0},     {"SX", 3.56e-8},      {"X", 3.56e-8}, {"H", 3.56e-8},
          {"CX", 3.52e-7}, {"ZPARITY", 3.698e-7}, {"BARRIER", 0.0}};
}

GateExecutor ideal_executor() {
  return [](Matrix& rho, const Gate& g) {
    if (g.name == "BARRIER" || g.name == "DELAY") return;
    const int n = qubit_count_of_dim(rho.rows());
    const Matrix u = gate_unitary(g, n);
    rho = u * rho * u.adjoint();
  };
}

GateExecutor depolarizing_executor(double p) {
  if (p < 0.0 || p > 1.0) throw ValidationError("depolarizing strength must lie in [0, 1]");
  return [p](Matrix& rho, const Gate& g) {
    if (g.name == "BARRIER") {
      const long dim = rho.rows();
      const Complex tr = rho.trace();
      rho = (1.0 - p) * rho +
            (p / static_cast<double>(dim)) * tr * Matrix::Identity(dim, dim);
      return;
    }
    if (g.name == "DELAY") return;
    const int n = qubit_count_of_dim(rho.rows());
    const Matrix u = gate_unitary(g, n);
    rho = u * rho * u.adjoint();
  };
}

GateExecutor damping_executor(const DeviceConfig& device,
                              std::map<std::string, double> durations) {
  // Kraus sets are cached per (duration, qubit); the map captures by value so
  // the executor owns everything it needs.
  auto cache = std::make_shared<std::map<std::pair<double, int>, std::vector<Matrix>>>();
  return [device, cache, durations = std::move(durations)](Matrix& rho, const Gate& g) {
    const int n = qubit_count_of_dim(rho.rows());
    if (device.num_transmons() < n) {
      throw ValidationError("device has fewer transmons than the circuit has qubits");
    }
    double duration = 0.0;
    if (g.name == "DELAY") {
      duration = g.duration;
    } else {
      const auto it = durations.find(g.name);
      if (it == durations.end()) {
        throw ValidationError("no duration registered for gate '" + g.name + "'");
      }
      duration = it->second;
      if (g.name != "BARRIER") {
        const Matrix u = gate_unitary(g, n);
        rho = u * rho * u.adjoint();
      }
    }
    if (duration <= 0.0) return;
    for (int q = 0; q < n; ++q) {
      const auto key = std::make_pair(duration, q);
      auto it = cache->find(key);
      if (it == cache->end()) {
        const TransmonParams& tp = device.transmon(q);
        it = cache->emplace(key, damping_kraus(duration, tp.t1, tp.t2)).first;
      }
      rho = apply_qubit_channel(rho, it->second, q, n);
    }
  };
}

Circuit zparity_as_two_cx() { return Circuit{3, {{"CX", {0, 1}}, {"CX", {2, 1}}}}; }

Circuit zparity_native() { return Circuit{3, {{"ZPARITY", {0, 1, 2}}}}; }

}  // namespace scrplab
