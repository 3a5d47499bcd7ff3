// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scrplab/device.hpp"
#include "scrplab/hamiltonian.hpp"
#include "scrplab/operators.hpp"
#include "scrplab/pauli.hpp"

using namespace scrplab;

namespace {

DeviceConfig single_transmon(double w_ghz, double alpha_mhz, int levels) {
  TransmonParams t;
  t.frequency = ghz_to_rad(w_ghz);
  t.anharmonicity = mhz_to_rad(alpha_mhz);
  t.t1 = 100e-6;
  t.t2 = 100e-6;
  t.levels = levels;
  return DeviceConfig({t}, {});
}

DeviceConfig two_transmons(double w1_ghz, double w2_ghz, double j_mhz, int levels) {
  TransmonParams a, b;
  a.frequency = ghz_to_rad(w1_ghz);
  b.frequency = ghz_to_rad(w2_ghz);
  a.anharmonicity = b.anharmonicity = mhz_to_rad(-340.0);
  a.t1 = b.t1 = 100e-6;
  a.t2 = b.t2 = 100e-6;
  a.levels = b.levels = levels;
  return DeviceConfig({a, b}, {{0, 1, mhz_to_rad(j_mhz)}});
}

double hermiticity_defect(const Matrix& h) {
  return (h - h.adjoint()).norm() / std::max(1.0, h.norm());
}

}  // namespace

TEST_CASE("single transmon, 2 levels: diag(0, w)") {
  const auto dev = single_transmon(5.0, -340.0, 2);
  const Matrix h = build_static_hamiltonian(dev);
  REQUIRE(h.rows() == 2);
  CHECK(std::abs(h(0, 0)) == 0.0);
  CHECK(h(1, 1).real() == doctest::Approx(ghz_to_rad(5.0)).epsilon(1e-14));
  CHECK(std::abs(h(0, 1)) == 0.0);
}

TEST_CASE("single transmon, 3 levels: Duffing spectrum diag(0, w, 2w + alpha)") {
  const auto dev = single_transmon(5.0, -340.0, 3);
  const Matrix h = build_static_hamiltonian(dev);
  REQUIRE(h.rows() == 3);
  CHECK(h(1, 1).real() == doctest::Approx(ghz_to_rad(5.0)).epsilon(1e-14));
  CHECK(h(2, 2).real() ==
        doctest::Approx(2 * ghz_to_rad(5.0) + mhz_to_rad(-340.0)).epsilon(1e-14));
}

TEST_CASE("two coupled transmons: single-excitation eigenvalues") {
  const double w1 = ghz_to_rad(5.1), w2 = ghz_to_rad(5.0), j = mhz_to_rad(3.0);
  const auto dev = two_transmons(5.1, 5.0, 3.0, 2);
  const Matrix h = build_static_hamiltonian(dev);
  // Single-excitation block over {|10>, |01>} (indices 1 and 2; transmon 0 is the LSB).
  Matrix block(2, 2);
  block << h(1, 1), h(1, 2), h(2, 1), h(2, 2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(block);
  const double delta = w1 - w2;
  const double lo = ((w1 + w2) - std::sqrt(delta * delta + 4 * j * j)) / 2;
  const double hi = ((w1 + w2) + std::sqrt(delta * delta + 4 * j * j)) / 2;
  CHECK(es.eigenvalues()(0) == doctest::Approx(lo).epsilon(1e-12));
  CHECK(es.eigenvalues()(1) == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("static and driven Hamiltonians are Hermitian") {
  const auto dev = paper_triplet();
  CHECK(hermiticity_defect(build_static_hamiltonian(dev)) < 1e-12);
  const double wd = dev.transmon(1).frequency;
  const Matrix h = build_rotating_frame_hamiltonian(
      dev, {{0, {mhz_to_rad(30.0), mhz_to_rad(5.0)}, wd}, {2, {mhz_to_rad(20.0), 0.0}, wd}});
  CHECK(hermiticity_defect(h) < 1e-12);
}

TEST_CASE("rotating frame at the target: target single-excitation entry is zero") {
  const auto dev = paper_triplet();
  const double wd = dev.transmon(1).frequency;
  const Matrix h = build_rotating_frame_hamiltonian(dev, {{1, {0.0, 0.0}, wd}});
  const auto comp = computational_indices(dev);
  CHECK(std::abs(h(comp[2], comp[2])) < 1e-6);  // |010>: target excited only
}

TEST_CASE("drive line enters as Omega/2 off-diagonal") {
  const auto dev = single_transmon(5.0, -340.0, 2);
  const double omega = mhz_to_rad(25.0);
  const Matrix h = build_rotating_frame_hamiltonian(dev, {{0, {omega, 0.0}, ghz_to_rad(5.0)}});
  CHECK(h(0, 1).real() == doctest::Approx(omega / 2).epsilon(1e-14));
  CHECK(h(0, 0).real() == doctest::Approx(0.0));
}

TEST_CASE("mismatched carriers are rejected") {
  const auto dev = paper_triplet();
  CHECK_THROWS_AS(build_rotating_frame_hamiltonian(
                      dev, {{0, {1.0, 0.0}, 1.0}, {2, {1.0, 0.0}, 2.0}}),
                  ValidationError);
}

TEST_CASE("frame consistency: zero-drive frame equals static minus carrier * total number") {
  const auto dev = paper_triplet();
  const double wd = ghz_to_rad(5.1);
  const Matrix h_rf = build_rotating_frame_hamiltonian(dev, {{0, {0.0, 0.0}, wd}});
  Matrix shift = Matrix::Zero(h_rf.rows(), h_rf.cols());
  for (int q = 0; q < dev.num_transmons(); ++q) {
    shift += embed_site(dev, q, number_op(dev.transmon(q).levels));
  }
  const Matrix expected = build_static_hamiltonian(dev) - wd * shift;
  CHECK((h_rf - expected).norm() / expected.norm() < 1e-14);
}

TEST_CASE("full 3-transmon rotating-frame matrix matches independent entrywise assembly") {
  const auto dev = paper_triplet();
  const double wd = dev.transmon(1).frequency;
  const Complex om1(mhz_to_rad(30.0), 0.0), om2(mhz_to_rad(-20.0), mhz_to_rad(4.0));
  const Matrix h = build_rotating_frame_hamiltonian(dev, {{0, om1, wd}, {2, om2, wd}});

  // Independent assembly: walk every pair of Fock states |n0 n1 n2>.
  const long dim = dev.fock_dimension();
  REQUIRE(dim == 27);
  auto digits = [](long idx) {
    return std::array<int, 3>{static_cast<int>(idx % 3), static_cast<int>((idx / 3) % 3),
                              static_cast<int>(idx / 9)};
  };
  Matrix ref = Matrix::Zero(dim, dim);
  const double j01 = dev.coupling(0, 1), j12 = dev.coupling(1, 2);
  for (long r = 0; r < dim; ++r) {
    const auto n = digits(r);
    double diag = 0;
    for (int q = 0; q < 3; ++q) {
      const auto& t = dev.transmon(q);
      diag += (t.frequency - wd) * n[q] + 0.5 * t.anharmonicity * n[q] * (n[q] - 1);
    }
    ref(r, r) = diag;
    for (long c = 0; c < dim; ++c) {
      const auto m = digits(c);
      // exchange: a_q^† a_p moves one excitation from p to q
      auto hop = [&](int q, int p, double strength) {
        if (m[q] + 1 == n[q] && m[p] - 1 == n[p] && m[3 - q - p] == n[3 - q - p]) {
          ref(r, c) += strength * std::sqrt(double(m[q] + 1)) * std::sqrt(double(m[p]));
        }
      };
      hop(0, 1, j01);
      hop(1, 0, j01);
      hop(1, 2, j12);
      hop(2, 1, j12);
      // drives on transmons 0 and 2
      auto drv = [&](int q, Complex om) {
        const int other1 = (q + 1) % 3, other2 = (q + 2) % 3;
        if (m[other1] == n[other1] && m[other2] == n[other2]) {
          if (m[q] - 1 == n[q]) ref(r, c) += 0.5 * std::conj(om) * std::sqrt(double(m[q]));
          if (m[q] + 1 == n[q]) ref(r, c) += 0.5 * om * std::sqrt(double(m[q] + 1));
        }
      };
      drv(0, om1);
      drv(2, om2);
    }
  }
  CHECK((h - ref).norm() / ref.norm() < 1e-12);
}

TEST_CASE("exchange symmetry: swapping control parameters conjugates by the permutation") {
  // Asymmetric controls so the swap is nontrivial.
  TransmonParams c1, t, c2;
  c1.frequency = ghz_to_rad(5.21);
  t.frequency = ghz_to_rad(5.05);
  c2.frequency = ghz_to_rad(5.15);
  c1.anharmonicity = mhz_to_rad(-330);
  t.anharmonicity = mhz_to_rad(-340);
  c2.anharmonicity = mhz_to_rad(-350);
  c1.t1 = t.t1 = c2.t1 = 100e-6;
  c1.t2 = t.t2 = c2.t2 = 100e-6;
  c1.levels = t.levels = c2.levels = 3;
  const double ja = mhz_to_rad(2.0), jb = mhz_to_rad(2.5);
  const DeviceConfig dev({c1, t, c2}, {{0, 1, ja}, {1, 2, jb}});
  const DeviceConfig swapped({c2, t, c1}, {{0, 1, jb}, {1, 2, ja}});

  const Matrix h = build_static_hamiltonian(dev);
  const Matrix hs = build_static_hamiltonian(swapped);
  // Permutation exchanging transmons 0 and 2 in the Fock index.
  const long dim = dev.fock_dimension();
  Matrix p = Matrix::Zero(dim, dim);
  for (long idx = 0; idx < dim; ++idx) {
    const long n0 = idx % 3, n1 = (idx / 3) % 3, n2 = idx / 9;
    p(n2 + 3 * n1 + 9 * n0, idx) = 1.0;
  }
  CHECK((hs - p * h * p.adjoint()).norm() / h.norm() < 1e-13);
}

TEST_CASE("dressing matches bare states at weak coupling and reports level repulsion") {
  const auto dev = paper_triplet();
  const Dressing d = static_dressing(dev, dev.transmon(1).frequency);
  // Overlap of each dressed state with its bare state should be near 1.
  for (long k = 0; k < d.basis.cols(); ++k) {
    CHECK(std::abs(d.basis(k, k)) > 0.99);
    CHECK(d.basis(k, k).real() > 0.0);  // sign fixed
  }
  // Basis is unitary.
  CHECK((d.basis.adjoint() * d.basis - Matrix::Identity(27, 27)).norm() < 1e-12);
}

TEST_CASE("echo-frame frequency is the control-averaged dressed target transition") {
  const auto dev = paper_triplet();
  const double f00 = dressed_transition_frequency(dev, 1, 0b000);
  const double f10 = dressed_transition_frequency(dev, 1, 0b001);
  const double f01 = dressed_transition_frequency(dev, 1, 0b100);
  const double f11 = dressed_transition_frequency(dev, 1, 0b101);
  const double avg = echo_frame_frequency(dev, 1, {0, 2});
  CHECK(avg == doctest::Approx((f00 + f10 + f01 + f11) / 4).epsilon(1e-12));
  // The dressed target frequency is Lamb-shifted below bare for this detuning pattern.
  CHECK(f00 < dev.transmon(1).frequency);
  // Static ZZ: the target transition depends on the control state at the tens-of-kHz scale.
  CHECK(std::abs(f11 - f00) / kTwoPi > 1e3);
  CHECK(std::abs(f11 - f00) / kTwoPi < 1e6);
}
