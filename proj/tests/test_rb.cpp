// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "scrplab/clifford_rb.hpp"
#include "scrplab/device.hpp"
#include "scrplab/pauli.hpp"

using namespace scrplab;

namespace {

std::string encode(const CliffordTableau& t) {
  std::string s;
  for (int row = 0; row < 2 * t.n(); ++row) {
    for (int q = 0; q < t.n(); ++q) {
      s += t.x_bit(row, q) ? '1' : '0';
      s += t.z_bit(row, q) ? '1' : '0';
    }
    s += t.phase_bit(row) ? '1' : '0';
  }
  return s;
}

bool same_gate(const Gate& a, const Gate& b) {
  return a.name == b.name && a.qubits == b.qubits && std::abs(a.param - b.param) < 1e-15 &&
         std::abs(a.duration - b.duration) < 1e-15;
}

Circuit random_clifford_circuit(std::mt19937_64& rng, int len) {
  std::uniform_int_distribution<int> qd(0, 2), kind(0, 7), kd(1, 3), od(0, 1);
  Circuit c{3, {}};
  for (int i = 0; i < len; ++i) {
    const int q = qd(rng);
    switch (kind(rng)) {
      case 0: c.gates.push_back({"H", {q}}); break;
      case 1: c.gates.push_back({"RZ", {q}, kd(rng) * M_PI / 2.0}); break;
      case 2: c.gates.push_back({"SX", {q}}); break;
      case 3: c.gates.push_back({"X", {q}}); break;
      case 4:
      case 5: {
        const int t = (q + 1 + od(rng)) % 3;
        c.gates.push_back({"CX", {q, t}});
        break;
      }
      default: c.gates.push_back({"ZPARITY", {0, 1, 2}}); break;
    }
  }
  return c;
}

double frob_distance(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

int count_cx(const Circuit& c) {
  int k = 0;
  for (const Gate& g : c.gates) k += g.name == "CX";
  return k;
}

const std::vector<int> kTenLengths{2, 3, 4, 5, 7, 9, 12, 17, 25, 38};

}  // namespace

TEST_CASE("tableau conjugation matches matrix conjugation for every primitive") {
  std::vector<Gate> gates;
  for (int q = 0; q < 3; ++q) {
    gates.push_back({"H", {q}});
    gates.push_back({"RZ", {q}, M_PI / 2.0});
    gates.push_back({"RZ", {q}, -M_PI / 2.0});
    gates.push_back({"RZ", {q}, M_PI});
    gates.push_back({"SX", {q}});
    gates.push_back({"X", {q}});
  }
  for (int c = 0; c < 3; ++c) {
    for (int t = 0; t < 3; ++t) {
      if (c != t) gates.push_back({"CX", {c, t}});
    }
  }
  gates.push_back({"ZPARITY", {0, 1, 2}});

  const std::vector<std::string> labels{"XII", "IXI", "IIX", "ZII", "IZI", "IIZ",
                                        "XYZ", "ZZY", "YXI", "IYY"};
  for (const Gate& g : gates) {
    CAPTURE(g.name);
    const CliffordTableau t = CliffordTableau::from_circuit(Circuit{3, {g}});
    CHECK(t.is_symplectic());
    const Matrix u = gate_unitary(g, 3);
    for (const std::string& label : labels) {
      CAPTURE(label);
      const auto [img, sign] = t.image(label);
      const Matrix lhs = u * pauli_matrix(label) * u.adjoint();
      CHECK(frob_distance(lhs, static_cast<double>(sign) * pauli_matrix(img)) <= 1e-12);
    }
  }
}

TEST_CASE("tableau composition and inversion behave as a group") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const Circuit ca = random_clifford_circuit(rng, 25);
    const Circuit cb = random_clifford_circuit(rng, 25);
    const CliffordTableau a = CliffordTableau::from_circuit(ca);
    const CliffordTableau b = CliffordTableau::from_circuit(cb);

    Circuit both = ca;
    both.gates.insert(both.gates.end(), cb.gates.begin(), cb.gates.end());
    CHECK(CliffordTableau::from_circuit(both) == a.then(b));

    const CliffordTableau ainv = a.inverse();
    CHECK(a.then(ainv).is_identity());
    CHECK(ainv.then(a).is_identity());
    CHECK(ainv.inverse() == a);
    CHECK(a.is_symplectic());
    CHECK(ainv.is_symplectic());
  }
  CHECK_THROWS_AS(CliffordTableau::from_circuit(Circuit{3, {{"RZ", {0}, 0.3}}}), ValidationError);
  CHECK_THROWS_AS(CliffordTableau::from_circuit(Circuit{3, {{"T", {0}}}}), ValidationError);
}

TEST_CASE("clifford sampling is deterministic, symplectic, and collision-free") {
  CHECK(encode(sample_uniform_clifford(7)) == encode(sample_uniform_clifford(7)));

  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const CliffordTableau t = sample_uniform_clifford(seed);
    if (seed < 100) CHECK(t.is_symplectic());
    seen.insert(encode(t));
  }
  CHECK(seen.size() == 200);

  int identity_count = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    identity_count += sample_uniform_clifford(1000000 + seed).is_identity();
  }
  // The three-qubit tableau group has ~9.3e7 elements, so 1e4 uniform draws
  // hit the identity with probability ~1e-4.
  CHECK(identity_count == 0);
}

TEST_CASE("single-qubit sampling covers all symplectic classes uniformly") {
  std::map<int, int> matrix_counts;
  std::map<int, int> sign_counts;
  const int samples = 6000;
  for (int s = 0; s < samples; ++s) {
    const CliffordTableau t = sample_uniform_clifford(77000 + s, 1);
    const int mk = (t.x_bit(0, 0) << 3) | (t.z_bit(0, 0) << 2) | (t.x_bit(1, 0) << 1) |
                   static_cast<int>(t.z_bit(1, 0));
    const int sk = (t.phase_bit(0) << 1) | static_cast<int>(t.phase_bit(1));
    ++matrix_counts[mk];
    ++sign_counts[sk];
  }
  CHECK(matrix_counts.size() == 6);
  for (const auto& [key, count] : matrix_counts) {
    CAPTURE(key);
    CHECK(count >= 850);   // 1000 expected, ~29 sigma of slack
    CHECK(count <= 1150);
  }
  CHECK(sign_counts.size() == 4);
  for (const auto& [key, count] : sign_counts) {
    CAPTURE(key);
    CHECK(count >= 1300);  // 1500 expected
    CHECK(count <= 1700);
  }
}

TEST_CASE("synthesis reproduces tableaus over the RZ/SX/CX gate set") {
  CHECK(decompose_clifford(CliffordTableau(3)).gates.empty());

  const CliffordTableau cx02 = CliffordTableau::from_circuit(Circuit{3, {{"CX", {0, 2}}}});
  const Circuit cx02_circ = decompose_clifford(cx02);
  REQUIRE(cx02_circ.gates.size() == 1);
  CHECK(same_gate(cx02_circ.gates.front(), Gate{"CX", {0, 2}}));

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const CliffordTableau t = sample_uniform_clifford(31337 + seed);
    const Circuit c = decompose_clifford(t);
    CAPTURE(seed);
    CHECK(CliffordTableau::from_circuit(c) == t);
    CHECK(count_cx(c) <= 15);
    for (const Gate& g : c.gates) {
      const bool known = g.name == "RZ" || g.name == "SX" || g.name == "CX";
      CHECK(known);
      if (g.name == "RZ") {
        const double a = std::abs(g.param);
        CHECK((std::abs(a - M_PI / 2.0) < 1e-15 || std::abs(a - M_PI) < 1e-15));
      }
    }
  }
}

TEST_CASE("routing replaces outer-pair CX by the four-gate echo and preserves the unitary") {
  const std::array<int, 3> line{0, 1, 2};

  const Circuit untouched{3, {{"CX", {0, 1}}, {"CX", {2, 1}}, {"SX", {0}}}};
  const Circuit routed_untouched = route_to_line(untouched, line);
  REQUIRE(routed_untouched.gates.size() == untouched.gates.size());
  for (std::size_t i = 0; i < untouched.gates.size(); ++i) {
    CHECK(same_gate(routed_untouched.gates[i], untouched.gates[i]));
  }

  const Circuit outer{3, {{"CX", {0, 2}}}};
  const Circuit routed = route_to_line(outer, line);
  REQUIRE(routed.gates.size() == 4);
  CHECK(same_gate(routed.gates[0], Gate{"CX", {1, 2}}));
  CHECK(same_gate(routed.gates[1], Gate{"CX", {0, 1}}));
  CHECK(same_gate(routed.gates[2], Gate{"CX", {1, 2}}));
  CHECK(same_gate(routed.gates[3], Gate{"CX", {0, 1}}));
  CHECK(frob_distance(circuit_unitary(routed), circuit_unitary(outer)) <= 1e-12);

  const Circuit mirrored{3, {{"CX", {2, 0}}}};
  const Circuit routed_mirror = route_to_line(mirrored, line);
  REQUIRE(routed_mirror.gates.size() == 4);
  CHECK(same_gate(routed_mirror.gates[0], Gate{"CX", {1, 0}}));
  CHECK(same_gate(routed_mirror.gates[1], Gate{"CX", {2, 1}}));
  CHECK(same_gate(routed_mirror.gates[2], Gate{"CX", {1, 0}}));
  CHECK(same_gate(routed_mirror.gates[3], Gate{"CX", {2, 1}}));
  CHECK(frob_distance(circuit_unitary(routed_mirror), circuit_unitary(mirrored)) <= 1e-12);

  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    std::mt19937_64 rng(seed);
    Circuit c = random_clifford_circuit(rng, 30);
    c.gates.push_back({"CX", {0, 2}});
    c.gates.push_back({"CX", {2, 0}});
    const Circuit r = route_to_line(c, line);
    CHECK(frob_distance(circuit_unitary(r), circuit_unitary(c)) <= 1e-12);
  }

  CHECK_THROWS_AS(route_to_line(Circuit{4, {{"SX", {3}}}}, line), ValidationError);
  CHECK_THROWS_AS(route_to_line(untouched, std::array<int, 3>{0, 1, 1}), ValidationError);
}

TEST_CASE("benchmark sequences close to the identity and share reference cliffords") {
  const std::array<int, 3> line{0, 1, 2};
  const std::vector<int> lengths{2, 3};
  const auto reference = build_irb_circuits(lengths, 4, std::nullopt, line, 99);
  CHECK(reference.size() == 8);

  for (const RbCircuit& rb : reference) {
    CAPTURE(rb.length);
    CAPTURE(rb.sample);
    CHECK(CliffordTableau::from_circuit(rb.circuit).is_identity());
  }

  const auto again = build_irb_circuits(lengths, 4, std::nullopt, line, 99);
  REQUIRE(again.size() == reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    REQUIRE(again[i].circuit.gates.size() == reference[i].circuit.gates.size());
    for (std::size_t g = 0; g < reference[i].circuit.gates.size(); ++g) {
      CHECK(same_gate(again[i].circuit.gates[g], reference[i].circuit.gates[g]));
    }
  }

  const auto interleaved = build_irb_circuits(lengths, 4, zparity_as_two_cx(), line, 99);
  for (const RbCircuit& rb : interleaved) {
    CHECK(CliffordTableau::from_circuit(rb.circuit).is_identity());
  }
  // Same seed -> the first random Clifford (everything before the first
  // BARRIER) is identical between the two streams.
  for (std::size_t i = 0; i < reference.size(); ++i) {
    std::size_t g = 0;
    for (; g < reference[i].circuit.gates.size(); ++g) {
      if (reference[i].circuit.gates[g].name == "BARRIER") break;
      REQUIRE(g < interleaved[i].circuit.gates.size());
      CHECK(same_gate(reference[i].circuit.gates[g], interleaved[i].circuit.gates[g]));
    }
    CHECK(interleaved[i].circuit.gates[g].name == "BARRIER");
  }

  const auto paper_scale = build_irb_circuits(kTenLengths, 50, std::nullopt, line, 5);
  CHECK(paper_scale.size() == 500);

  CHECK_THROWS_AS(
      build_irb_circuits(lengths, 4, Circuit{3, {{"RZ", {0}, 0.3}}}, line, 99),
      ValidationError);
  CHECK_THROWS_AS(build_irb_circuits({0}, 4, std::nullopt, line, 99), ValidationError);
}

TEST_CASE("noiseless benchmarking fits a unit decay with zero error") {
  const std::array<int, 3> line{0, 1, 2};
  const std::vector<int> lengths{2, 3, 5, 9};
  const auto reference = build_irb_circuits(lengths, 6, std::nullopt, line, 21);
  const RBResult ref = run_rb(reference, ideal_executor());
  for (double m : ref.mean_survival) CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ref.decay == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(ref.error_per_clifford) <= 1e-9);

  const auto interleaved = build_irb_circuits(lengths, 6, zparity_native(), line, 21);
  const RBResult intl = run_rb(interleaved, ideal_executor());
  const EpgEstimate epg = interleaved_epg(ref, intl);
  CHECK(std::abs(epg.value) <= 1e-9);
}

TEST_CASE("depolarizing noise reproduces the exact survival model") {
  const std::array<int, 3> line{0, 1, 2};
  for (const double p : {0.005, 0.02}) {
    CAPTURE(p);
    const auto circuits = build_irb_circuits(kTenLengths, 3, std::nullopt, line, 4242);
    const RBResult res = run_rb(circuits, depolarizing_executor(p));
    // One depolarizing kick per Clifford including the inversion: survival is
    // (1-p)^(m+1) * 7/8 + 1/8 for every circuit of length m.
    for (std::size_t i = 0; i < res.lengths.size(); ++i) {
      const double expected = std::pow(1.0 - p, res.lengths[i] + 1) * (7.0 / 8.0) + 1.0 / 8.0;
      CHECK(std::abs(res.mean_survival[i] - expected) <= 1e-12);
      CHECK(res.std_survival[i] <= 1e-12);
    }
    CHECK(std::abs(res.decay - (1.0 - p)) <= 1e-6);
  }
}

TEST_CASE("sampled depolarizing benchmarking recovers the decay within statistics") {
  const std::array<int, 3> line{0, 1, 2};
  const double p = 0.02;
  const auto circuits = build_irb_circuits(kTenLengths, 50, std::nullopt, line, 777);
  const RBResult res = run_rb(circuits, depolarizing_executor(p), 400, 12345);
  CAPTURE(res.decay);
  CAPTURE(res.decay_stderr);
  CHECK(res.decay_stderr > 0.0);
  CHECK(std::abs(res.decay - (1.0 - p)) <= 2.0 * res.decay_stderr);
}

TEST_CASE("interleaving the identity leaves every survival untouched") {
  const std::array<int, 3> line{0, 1, 2};
  const std::vector<int> lengths{2, 3, 5};
  const auto reference = build_irb_circuits(lengths, 4, std::nullopt, line, 55);
  const auto identity_interleaved = build_irb_circuits(lengths, 4, Circuit{3, {}}, line, 55);
  const RBResult ref = run_rb(reference, depolarizing_executor(0.01));
  const RBResult intl = run_rb(identity_interleaved, depolarizing_executor(0.01));
  REQUIRE(ref.mean_survival.size() == intl.mean_survival.size());
  for (std::size_t i = 0; i < ref.mean_survival.size(); ++i) {
    CHECK(std::abs(ref.mean_survival[i] - intl.mean_survival[i]) <= 1e-15);
  }
  CHECK(std::abs(interleaved_epg(ref, intl).value) <= 1e-12);
}

TEST_CASE("relaxation noise ranks the native parity gate above two CX") {
  const std::array<int, 3> line{0, 1, 2};
  const DeviceConfig device = paper_triplet();
  const std::vector<int> lengths{2, 3, 4, 5, 7, 9};
  const int samples = 6;

  const auto reference = build_irb_circuits(lengths, samples, std::nullopt, line, 31);
  const auto with_twocx = build_irb_circuits(lengths, samples, zparity_as_two_cx(), line, 31);
  const auto with_native = build_irb_circuits(lengths, samples, zparity_native(), line, 31);

  const RBResult ref = run_rb(reference, damping_executor(device));
  const RBResult twocx = run_rb(with_twocx, damping_executor(device));
  const RBResult native = run_rb(with_native, damping_executor(device));

  const EpgEstimate epg_twocx = interleaved_epg(ref, twocx);
  const EpgEstimate epg_native = interleaved_epg(ref, native);
  CAPTURE(epg_twocx.value);
  CAPTURE(epg_native.value);
  CHECK(epg_native.value > 0.0);
  CHECK(epg_twocx.value > 0.0);
  // The native parity gate runs 369.8 ns against 704 ns for the two-CX
  // compilation, so relaxation alone must rank it strictly better.
  CHECK(epg_native.value < epg_twocx.value);
}
