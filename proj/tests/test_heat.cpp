// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "scrplab/device.hpp"
#include "scrplab/effective_rates.hpp"
#include "scrplab/heat.hpp"
#include "scrplab/operators.hpp"
#include "scrplab/pauli.hpp"
#include "scrplab/propagate.hpp"
#include "scrplab/hamiltonian.hpp"

using namespace scrplab;

namespace {

std::array<double, 3> random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::array<double, 3> axis{dist(rng), dist(rng), dist(rng)};
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  for (double& c : axis) c /= norm;
  return axis;
}

/// Small random rotation near the ideal conditional angle of block `bits`.
BlockRotation perturbed_block(const std::string& bits, GateKind kind, std::mt19937_64& rng,
                              double error_scale) {
  std::uniform_real_distribution<double> err(-error_scale, error_scale);
  double ideal = 0.0;
  for (char c : bits) ideal += (c == '0') ? M_PI / 2.0 : -M_PI / 2.0;
  if (kind == GateKind::CR) ideal = (bits == "0") ? M_PI / 2.0 : -M_PI / 2.0;
  BlockRotation block;
  block.angle = ideal + err(rng);
  std::array<double, 3> tilt{1.0, err(rng), err(rng)};
  const double norm = std::sqrt(tilt[0] * tilt[0] + tilt[1] * tilt[1] + tilt[2] * tilt[2]);
  for (double& c : tilt) c /= norm;
  block.axis = tilt;
  return block;
}

std::vector<std::string> kind_blocks(GateKind kind) {
  if (kind == GateKind::CR) return {"0", "1"};
  return {"00", "10", "01", "11"};
}

/// Forward Walsh system: per-block coefficient from Pauli-label coefficients.
std::map<std::string, Complex> forward_walsh(const std::map<std::string, Complex>& labels,
                                             GateKind kind) {
  std::map<std::string, Complex> out;
  for (const std::string& bits : kind_blocks(kind)) {
    Complex sum = 0.0;
    for (const auto& [label, value] : labels) {
      double sign = 1.0;
      if (label.front() == 'Z' && bits[0] == '1') sign = -sign;
      if (kind == GateKind::SCRP && label.back() == 'Z' && bits[1] == '1') sign = -sign;
      sum += sign * value;
    }
    out[bits] = sum;
  }
  return out;
}

/// Z-parity target: CX(c1 -> t) CX(c2 -> t) on (c1, t, c2) = bits (0, 1, 2).
Matrix zparity_unitary() {
  Matrix u = Matrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    const int c1 = i & 1, t = (i >> 1) & 1, c2 = (i >> 2) & 1;
    const int j = c1 | ((t ^ c1 ^ c2) << 1) | (c2 << 2);
    u(j, i) = 1.0;
  }
  return u;
}

double phase_invariant_distance(const Matrix& a, const Matrix& b) {
  return 1.0 - std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

}  // namespace

TEST_CASE("amplification spec and block rotations validate their inputs") {
  HeatSpec spec;
  spec.control_bits = "01";
  CHECK_NOTHROW(spec.validate(GateKind::SCRP));
  CHECK_THROWS_AS(spec.validate(GateKind::CR), ValidationError);

  spec.repetitions = 5;
  CHECK_THROWS_AS(spec.validate(GateKind::SCRP), ValidationError);
  spec.repetitions = -2;
  CHECK_THROWS_AS(spec.validate(GateKind::SCRP), ValidationError);
  spec.repetitions = 6;

  spec.refocus_pauli = 'X';
  CHECK_THROWS_AS(spec.validate(GateKind::SCRP), ValidationError);
  spec.refocus_pauli = 'Y';

  spec.control_bits = "02";
  CHECK_THROWS_AS(spec.validate(GateKind::SCRP), ValidationError);
  spec.control_bits = "01";

  spec.measure_basis = 'A';
  CHECK_THROWS_AS(spec.validate(GateKind::SCRP), ValidationError);

  BlockRotation block;
  block.axis = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(block.validate(), ValidationError);
  block.axis = {0.0, 1.0, 0.0};
  CHECK_NOTHROW(block.validate());
  CHECK_THROWS_AS(block.coefficient('Q'), ValidationError);
}

TEST_CASE("block rotation coefficients match the unitary trace") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int trial = 0; trial < 20; ++trial) {
    BlockRotation block;
    block.axis = random_axis(rng);
    block.angle = angle(rng);
    const Matrix u = block.unitary();
    CHECK(std::abs((u * u.adjoint() - Matrix::Identity(2, 2)).norm()) < 1e-12);
    for (char p : {'X', 'Y', 'Z'}) {
      const Complex from_trace = (pauli_1q(p) * u).trace() / 2.0;
      CHECK(std::abs(block.coefficient(p) - from_trace) < 1e-12);
    }
  }
}

TEST_CASE("measurement keys cover each control state once") {
  const auto scrp = heat_measurement_keys(GateKind::SCRP);
  REQUIRE(scrp.size() == 8);
  const auto cr = heat_measurement_keys(GateKind::CR);
  REQUIRE(cr.size() == 4);
  // Even-parity control states pair the refocusing axis with the same readout
  // basis; odd states and the two-level version read the conjugate quadrature.
  for (const auto& [bits, refocus, basis] : scrp) {
    const bool even = (bits == "00" || bits == "11");
    CHECK(basis == (even ? refocus : (refocus == 'Y' ? 'Z' : 'Y')));
  }
  for (const auto& [bits, refocus, basis] : cr) {
    CHECK(basis == (refocus == 'Y' ? 'Z' : 'Y'));
  }
}

TEST_CASE("walsh reconstruction inverts the control-state sign system") {
  // Equal coefficients across all control states collapse onto the identity label.
  std::map<std::string, Complex> per_block{
      {"00", {0.0, 0.3}}, {"10", {0.0, 0.3}}, {"01", {0.0, 0.3}}, {"11", {0.0, 0.3}}};
  auto labels = walsh_reconstruct(per_block, 'Y');
  CHECK(std::abs(labels.at("IYI") - Complex(0.0, 0.3)) < 1e-14);
  CHECK(std::abs(labels.at("ZYI")) < 1e-14);
  CHECK(std::abs(labels.at("IYZ")) < 1e-14);
  CHECK(std::abs(labels.at("ZYZ")) < 1e-14);

  // A sign flip against the first control bit lands on the Z-on-first-control label.
  per_block = {{"00", {0.0, 0.3}}, {"10", {0.0, -0.3}}, {"01", {0.0, 0.3}}, {"11", {0.0, -0.3}}};
  labels = walsh_reconstruct(per_block, 'Y');
  CHECK(std::abs(labels.at("ZYI") - Complex(0.0, 0.3)) < 1e-14);
  CHECK(std::abs(labels.at("IYI")) < 1e-14);

  // Round trip through the forward system, both gate kinds.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::map<std::string, Complex> truth_scrp{{"IZI", {coeff(rng), coeff(rng)}},
                                            {"ZZI", {coeff(rng), coeff(rng)}},
                                            {"IZZ", {coeff(rng), coeff(rng)}},
                                            {"ZZZ", {coeff(rng), coeff(rng)}}};
  auto blocks = forward_walsh(truth_scrp, GateKind::SCRP);
  auto recovered = walsh_reconstruct(blocks, 'Z');
  for (const auto& [label, value] : truth_scrp) {
    CHECK(std::abs(recovered.at(label) - value) < 1e-14);
  }

  std::map<std::string, Complex> truth_cr{{"IY", {coeff(rng), coeff(rng)}},
                                          {"ZY", {coeff(rng), coeff(rng)}}};
  blocks = forward_walsh(truth_cr, GateKind::CR);
  recovered = walsh_reconstruct(blocks, 'Y');
  for (const auto& [label, value] : truth_cr) {
    CHECK(std::abs(recovered.at(label) - value) < 1e-14);
  }

  CHECK_THROWS_AS(walsh_reconstruct({{"00", 0.1}}, 'Y'), ValidationError);
  CHECK_THROWS_AS(walsh_reconstruct(blocks, 'Q'), ValidationError);
}

TEST_CASE("rotary cost sums error labels only") {
  CHECK(rotary_cost({}) == 0.0);
  CHECK(rotary_cost({{"ZYI", Complex(0.0, 0.3)}}) == doctest::Approx(0.3));
  CHECK(rotary_cost({{"ZYI", Complex(0.3, 0.4)}, {"IXI", Complex(1.0, 0.0)}}) ==
        doctest::Approx(0.5));
  // Conditional X labels and control-only labels are the gate, not the error.
  CHECK(rotary_cost({{"ZXI", Complex(1.0, 0.0)}, {"ZII", Complex(1.0, 0.0)}}) == 0.0);
  // Two-level labels participate with the same filter.
  CHECK(rotary_cost({{"IY", Complex(0.0, 0.1)}, {"ZZ", Complex(0.2, 0.0)},
                     {"XY", Complex(9.0, 0.0)}}) == doctest::Approx(0.3));
}

TEST_CASE("estimator inverts the amplification relations") {
  // A +0.2 per-repetition Y signal on the odd control state 01 is a +0.1i
  // Y coefficient of that block.
  const int n = 6;
  HeatMeasurements meas;
  for (const auto& key : heat_measurement_keys(GateKind::SCRP)) meas[key] = 0.0;
  meas[{"01", 'Y', 'Z'}] = 0.2 * n;
  const auto coeffs = estimate_block_coefficients(meas, n, GateKind::SCRP);
  CHECK(std::abs(coeffs.at("01").first - Complex(0.0, 0.1)) < 1e-14);
  CHECK(std::abs(coeffs.at("01").second) < 1e-14);

  HeatMeasurements incomplete = meas;
  incomplete.erase({"11", 'Z', 'Z'});
  CHECK_THROWS_AS(estimate_block_coefficients(incomplete, n, GateKind::SCRP), ValidationError);

  // Ideal-amplification tables invert exactly for arbitrary rotations.
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> angle(-2.8, 2.8);
  for (GateKind kind : {GateKind::SCRP, GateKind::CR}) {
    std::map<std::string, BlockRotation> blocks;
    for (const std::string& bits : kind_blocks(kind)) {
      blocks[bits] = BlockRotation{random_axis(rng), angle(rng)};
    }
    const auto estimated =
        estimate_block_coefficients(ideal_heat_measurements(blocks, n, kind), n, kind);
    for (const auto& [bits, block] : blocks) {
      CHECK(std::abs(estimated.at(bits).first - block.coefficient('Y')) < 1e-12);
      CHECK(std::abs(estimated.at(bits).second - block.coefficient('Z')) < 1e-12);
    }
  }
}

TEST_CASE("synthetic rotations recover exactly and within sampled error bars") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> angle(-0.12, 0.12);
  const int n = 6, shots = 400, trials = 12;
  const double sampled_bound = 3.0 / std::sqrt(shots * 50.0);

  for (GateKind kind : {GateKind::SCRP, GateKind::CR}) {
    for (int trial = 0; trial < trials; ++trial) {
      std::map<std::string, BlockRotation> blocks;
      std::map<std::string, Complex> truth_y, truth_z;
      for (const std::string& bits : kind_blocks(kind)) {
        blocks[bits] = BlockRotation{random_axis(rng), angle(rng)};
        truth_y[bits] = blocks[bits].coefficient('Y');
        truth_z[bits] = blocks[bits].coefficient('Z');
      }
      const auto truth_labels_y = walsh_reconstruct(truth_y, 'Y');
      const auto truth_labels_z = walsh_reconstruct(truth_z, 'Z');

      // Exact expectations invert to the truth at numerical precision.
      const auto exact =
          estimate_block_coefficients(ideal_heat_measurements(blocks, n, kind), n, kind);
      std::map<std::string, Complex> exact_y, exact_z;
      for (const auto& [bits, pair] : exact) {
        exact_y[bits] = pair.first;
        exact_z[bits] = pair.second;
      }
      for (const auto& [label, value] : walsh_reconstruct(exact_y, 'Y')) {
        CHECK(std::abs(value - truth_labels_y.at(label)) < 1e-10);
      }
      for (const auto& [label, value] : walsh_reconstruct(exact_z, 'Z')) {
        CHECK(std::abs(value - truth_labels_z.at(label)) < 1e-10);
      }

      // Finite shots stay within the aggregate binomial error budget.
      const auto sampled = estimate_block_coefficients(
          sampled_heat_measurements(blocks, n, kind, shots, rng), n, kind);
      std::map<std::string, Complex> sampled_y, sampled_z;
      for (const auto& [bits, pair] : sampled) {
        sampled_y[bits] = pair.first;
        sampled_z[bits] = pair.second;
      }
      for (const auto& [label, value] : walsh_reconstruct(sampled_y, 'Y')) {
        CHECK(std::abs(value - truth_labels_y.at(label)) < sampled_bound);
      }
      for (const auto& [label, value] : walsh_reconstruct(sampled_z, 'Z')) {
        CHECK(std::abs(value - truth_labels_z.at(label)) < sampled_bound);
      }
    }
  }

  // Over-amplified rotations cannot be sampled: the expectation leaves [-1, 1].
  std::map<std::string, BlockRotation> too_big;
  for (const std::string& bits : kind_blocks(GateKind::CR)) {
    too_big[bits] = BlockRotation{{0.0, 1.0, 0.0}, 1.2};
  }
  CHECK_THROWS_AS(sampled_heat_measurements(too_big, n, GateKind::CR, shots, rng),
                  ValidationError);
}

TEST_CASE("sequence schedules follow the amplification layout") {
  const DeviceConfig device = paper_triplet();
  const double half = 80e-9, sigma = 4e-9;
  const Schedule gate = build_scrp_schedule(device, 0, 2, 1, Complex(mhz_to_rad(20.0), 0.0),
                                            Complex(mhz_to_rad(18.0), 0.0), Complex(0.0, 0.0),
                                            half, sigma);
  HeatSpec spec;
  spec.control_bits = "10";
  spec.refocus_pauli = 'Y';
  spec.measure_basis = 'Z';
  const Schedule seq = build_heat_sequence_scrp(spec, gate);

  const double period = gate.total_duration();
  CHECK(seq.total_duration() == doctest::Approx(spec.repetitions * period));

  int control_preps = 0, target_preps = 0, refocus_count = 0, tone_count = 0;
  for (const auto& inst : seq.instructions()) {
    if (const auto* rot = std::get_if<IdealRotation>(&inst.op)) {
      if (inst.start == 0.0 && rot->qubit == 0 && rot->axis == 'X' && rot->angle == M_PI) {
        ++control_preps;
      } else if (inst.start == 0.0 && rot->qubit == 1 && rot->axis == 'Y' &&
                 rot->angle == M_PI / 2.0) {
        ++target_preps;
      } else if (rot->qubit == 1 && rot->axis == 'Y' && rot->angle == M_PI) {
        ++refocus_count;
        const double ratio = inst.start / period;
        CHECK(ratio >= 1.0 - 1e-9);
        CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
      }
    } else if (!std::get_if<Delay>(&inst.op)) {
      ++tone_count;
    }
  }
  // Control bits "10" excite only the first control; one target preparation;
  // one refocusing pulse closes every repetition.
  CHECK(control_preps == 1);
  CHECK(target_preps == 1);
  CHECK(refocus_count == spec.repetitions);

  int gate_tones = 0;
  for (const auto& inst : gate.instructions()) {
    if (!std::get_if<IdealRotation>(&inst.op) && !std::get_if<Delay>(&inst.op)) ++gate_tones;
  }
  CHECK(tone_count == spec.repetitions * gate_tones);

  // Reading out Y appends exactly one pre-rotation at the end of the train.
  HeatSpec y_spec = spec;
  y_spec.measure_basis = 'Y';
  const Schedule y_seq = build_heat_sequence_scrp(y_spec, gate);
  CHECK(y_seq.instructions().size() == seq.instructions().size() + 1);
  int trailing = 0;
  for (const auto& inst : y_seq.instructions()) {
    const auto* rot = std::get_if<IdealRotation>(&inst.op);
    if (rot != nullptr && rot->qubit == 1 && rot->axis == 'X' && rot->angle == M_PI / 2.0 &&
        inst.start == doctest::Approx(spec.repetitions * period)) {
      ++trailing;
    }
  }
  CHECK(trailing == 1);

  // A two-control schedule is rejected by the single-control builder and vice versa.
  CHECK_THROWS_AS(build_heat_sequence_cr(spec, gate), ValidationError);
  const Schedule ecr = build_ecr_schedule(device, 0, 1, Complex(mhz_to_rad(20.0), 0.0),
                                          Complex(0.0, 0.0), half, sigma);
  HeatSpec cr_spec;
  cr_spec.control_bits = "1";
  CHECK_NOTHROW(build_heat_sequence_cr(cr_spec, ecr));
  CHECK_THROWS_AS(build_heat_sequence_scrp(cr_spec, ecr), ValidationError);
}

TEST_CASE("sequence expectations vanish for the ideal parity gate") {
  for (GateKind kind : {GateKind::SCRP, GateKind::CR}) {
    std::map<std::string, BlockRotation> blocks;
    for (const std::string& bits : kind_blocks(kind)) {
      double ideal = 0.0;
      for (char c : bits) ideal += (c == '0') ? M_PI / 2.0 : -M_PI / 2.0;
      blocks[bits] = BlockRotation{{1.0, 0.0, 0.0}, ideal};
    }
    const Matrix gate = block_unitary(blocks, kind);
    const std::vector<int> controls = (kind == GateKind::CR) ? std::vector<int>{0}
                                                             : std::vector<int>{0, 2};
    const auto meas = heat_measurements(gate, controls, 1, 6, kind);
    for (const auto& [key, value] : meas) CHECK(std::abs(value) < 1e-12);
  }
}

TEST_CASE("sequence expectations track the ideal model to leading order") {
  std::mt19937_64 rng(53);
  for (GateKind kind : {GateKind::SCRP, GateKind::CR}) {
    std::map<std::string, BlockRotation> blocks;
    for (const std::string& bits : kind_blocks(kind)) {
      blocks[bits] = perturbed_block(bits, kind, rng, 0.02);
    }
    const Matrix gate = block_unitary(blocks, kind);
    const std::vector<int> controls = (kind == GateKind::CR) ? std::vector<int>{0}
                                                             : std::vector<int>{0, 2};
    const auto simulated = heat_measurements(gate, controls, 1, 6, kind);
    const auto model = ideal_heat_measurements(blocks, 6, kind);
    for (const auto& [key, value] : model) {
      CHECK(std::abs(simulated.at(key) - value) <
            std::max(0.10 * std::abs(value), 0.015));
    }
  }
}

TEST_CASE("amplification grows linearly with repetitions") {
  // A pure axis tilt toward Y on the control-0 state of a two-level gate.
  std::map<std::string, BlockRotation> blocks;
  const double tilt = 0.0057;
  std::array<double, 3> axis{1.0, tilt, 0.0};
  const double norm = std::sqrt(1.0 + tilt * tilt);
  axis[0] /= norm;
  axis[1] /= norm;
  blocks["0"] = BlockRotation{axis, M_PI / 2.0};
  blocks["1"] = BlockRotation{{1.0, 0.0, 0.0}, -M_PI / 2.0};
  const Matrix gate = block_unitary(blocks, GateKind::CR);

  const auto signal = [&](int reps) {
    HeatSpec spec;
    spec.repetitions = reps;
    spec.refocus_pauli = 'Y';
    spec.control_bits = "0";
    spec.measure_basis = 'Z';
    return heat_expectation(gate, {0}, 1, spec);
  };
  const double m2 = signal(2), m8 = signal(8);
  CHECK(std::abs(m2) > 1e-4);
  CHECK(m8 / m2 == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("block extraction fixes global phase and branch sign") {
  std::mt19937_64 rng(71);
  for (GateKind kind : {GateKind::SCRP, GateKind::CR}) {
    std::map<std::string, BlockRotation> blocks;
    for (const std::string& bits : kind_blocks(kind)) {
      blocks[bits] = perturbed_block(bits, kind, rng, 0.05);
    }
    const Matrix gate = std::exp(Complex(0.0, 2.1)) * block_unitary(blocks, kind);
    const std::vector<int> controls = (kind == GateKind::CR) ? std::vector<int>{0}
                                                             : std::vector<int>{0, 2};
    const auto coeffs = block_coefficients_from_unitary(gate, controls, 1, kind);
    for (const auto& [bits, block] : blocks) {
      CHECK(std::abs(coeffs.at(bits).first - block.coefficient('Y')) < 1e-12);
      CHECK(std::abs(coeffs.at(bits).second - block.coefficient('Z')) < 1e-12);
    }
  }

  // A block nowhere near its ideal conditional rotation is ambiguous.
  std::map<std::string, BlockRotation> wrong;
  for (const std::string& bits : kind_blocks(GateKind::SCRP)) {
    wrong[bits] = BlockRotation{{1.0, 0.0, 0.0}, 0.2};
  }
  CHECK_THROWS_AS(
      block_coefficients_from_unitary(block_unitary(wrong, GateKind::SCRP), {0, 2}, 1,
                                      GateKind::SCRP),
      NumericalError);
}

TEST_CASE("direct and sequence analyses agree on synthetic gates") {
  std::mt19937_64 rng(89);
  std::map<std::string, BlockRotation> blocks;
  for (const std::string& bits : kind_blocks(GateKind::SCRP)) {
    blocks[bits] = perturbed_block(bits, GateKind::SCRP, rng, 0.02);
  }
  const Matrix gate = block_unitary(blocks, GateKind::SCRP);

  const auto direct = block_coefficients_from_unitary(gate, {0, 2}, 1, GateKind::SCRP);
  const auto sequence = estimate_block_coefficients(
      heat_measurements(gate, {0, 2}, 1, 6, GateKind::SCRP), 6, GateKind::SCRP);

  std::map<std::string, Complex> direct_y, direct_z, seq_y, seq_z;
  for (const auto& [bits, pair] : direct) {
    direct_y[bits] = pair.first;
    direct_z[bits] = pair.second;
    CHECK(std::abs(pair.first - sequence.at(bits).first) <
          std::max(0.10 * std::abs(pair.first), 1.5e-3));
    CHECK(std::abs(pair.second - sequence.at(bits).second) <
          std::max(0.10 * std::abs(pair.second), 1.5e-3));
  }
  for (const auto& [bits, pair] : sequence) {
    seq_y[bits] = pair.first;
    seq_z[bits] = pair.second;
  }

  auto cost_of = [](const std::map<std::string, Complex>& y,
                    const std::map<std::string, Complex>& z) {
    std::map<std::string, Complex> labels = walsh_reconstruct(y, 'Y');
    for (const auto& [label, value] : walsh_reconstruct(z, 'Z')) labels[label] = value;
    return rotary_cost(labels);
  };
  const double fast_cost = cost_of(direct_y, direct_z);
  const double full_cost = cost_of(seq_y, seq_z);
  CHECK(fast_cost > 1e-3);
  CHECK(std::abs(fast_cost - full_cost) < 0.15 * full_cost);
}

TEST_CASE("pipeline matches hamiltonian extraction on a propagated gate") {
  const DeviceConfig device = paper_triplet();
  const ScrpAmplitudeSolve calib = default_scrp_calibration();
  const Schedule gate = build_scrp_schedule(device, 0, 2, 1, Complex(calib.omega1, 0.0),
                                            Complex(calib.omega2, 0.0), Complex(0.0, 0.0),
                                            184.9e-9, 4e-9);
  const PropagationResult prop = propagate(gate, device, 1e-11);
  const Dressing dressing = static_dressing(device, gate.frame_carrier());
  const Matrix projected =
      project_to_qubit_subspace(prop.unitary, device, dressing.basis).unitary;

  // The echoes cancel control rotations only to leading order, so the raw
  // propagator keeps a few percent of off-block mass. Both analyses model the
  // controls-diagonal physics; fix the fixture by keeping each control block
  // (re-unitarized, phases retained) and dropping the rest.
  Matrix diagonal = Matrix::Zero(8, 8);
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) {
      Matrix block(2, 2);
      for (int sp = 0; sp < 2; ++sp) {
        for (int s = 0; s < 2; ++s) block(sp, s) = projected(b1 + 2 * sp + 4 * b2, b1 + 2 * s + 4 * b2);
      }
      block = polar_unitary(block);
      for (int sp = 0; sp < 2; ++sp) {
        for (int s = 0; s < 2; ++s) diagonal(b1 + 2 * sp + 4 * b2, b1 + 2 * s + 4 * b2) = block(sp, s);
      }
    }
  }

  // Compose two known small conditional errors on top of the propagated gate so
  // every compared coefficient is comfortably nonzero.
  const auto pauli_rotation = [](const std::string& label, double angle) {
    const Matrix p = pauli_matrix(label);
    return std::cos(angle / 2.0) * Matrix::Identity(p.rows(), p.cols()) -
           Complex(0.0, std::sin(angle / 2.0)) * p;
  };
  const Matrix w = pauli_rotation("ZZI", 0.036) * pauli_rotation("IYI", 0.024) * diagonal;

  const auto sequence = estimate_block_coefficients(
      heat_measurements(w, {0, 2}, 1, 6, GateKind::SCRP), 6, GateKind::SCRP);

  const ExtractedHamiltonian extracted =
      extract_effective_hamiltonian(w, gate.total_duration(), {0, 2});
  const auto coefficient = [&](const std::string& label) {
    const auto it = extracted.coefficients.find(label);
    return (it == extracted.coefficients.end()) ? 0.0 : it->second.real();
  };

  double largest_y = 0.0;
  for (const std::string& bits : kind_blocks(GateKind::SCRP)) {
    const double z1 = (bits[0] == '0') ? 1.0 : -1.0;
    const double z2 = (bits[1] == '0') ? 1.0 : -1.0;
    std::array<double, 3> g{};
    const std::string paulis = "XYZ";
    for (int p = 0; p < 3; ++p) {
      for (const char q : {'I', 'Z'}) {
        for (const char r : {'I', 'Z'}) {
          const std::string label{q, paulis[static_cast<size_t>(p)], r};
          g[static_cast<size_t>(p)] += coefficient(label) * (q == 'Z' ? z1 : 1.0) *
                                       (r == 'Z' ? z2 : 1.0) * gate.total_duration();
        }
      }
    }
    const double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    REQUIRE(norm > 1e-12);
    const BlockRotation predicted{{g[0] / norm, g[1] / norm, g[2] / norm}, 2.0 * norm};
    const Complex predicted_y = predicted.coefficient('Y');
    const Complex predicted_z = predicted.coefficient('Z');
    largest_y = std::max(largest_y, std::abs(predicted_y));
    CHECK(std::abs(sequence.at(bits).first - predicted_y) <
          std::max(0.10 * std::abs(predicted_y), 1.5e-3));
    CHECK(std::abs(sequence.at(bits).second - predicted_z) <
          std::max(0.10 * std::abs(predicted_z), 1.5e-3));
  }
  CHECK(largest_y > 5e-3);
}

TEST_CASE("rotary sweep yields fifty points and suppresses an injected error") {
  const DeviceConfig device = qubit_limit_triplet();
  const double half = 120e-9, sigma = 4e-9;
  const double omega1 = mhz_to_rad(45.0), omega2 = mhz_to_rad(40.0);
  const double injected = mhz_to_rad(0.5);

  const auto builder = [&](double amplitude) {
    return build_scrp_schedule(device, 0, 2, 1, Complex(omega1, 0.0), Complex(omega2, 0.0),
                               Complex(amplitude, injected), half, sigma);
  };
  CalibrationOptions options;
  options.fast = true;
  const CalibrationResult result =
      calibrate_rotary_amplitude(device, builder, mhz_to_rad(12.0), options);

  REQUIRE(result.cost_curve.size() == 50);
  CHECK(result.cost_curve.front().first == 0.0);
  const double step = result.cost_curve[1].first - result.cost_curve[0].first;
  for (size_t k = 1; k < result.cost_curve.size(); ++k) {
    CHECK(result.cost_curve[k].first - result.cost_curve[k - 1].first ==
          doctest::Approx(step).epsilon(1e-9));
  }

  const double cost_at_zero = result.cost_curve.front().second;
  double best_cost = cost_at_zero;
  for (const auto& [amplitude, cost] : result.cost_curve) {
    if (amplitude == result.best_amplitude) best_cost = cost;
  }
  CHECK(cost_at_zero > 1e-3);
  CHECK(best_cost <= 0.5 * cost_at_zero);

  CHECK_THROWS_AS(calibrate_rotary_amplitude(device, builder, 0.0, options), ValidationError);
}

TEST_CASE("amplitude solver converges from the perturbative cold start") {
  const DeviceConfig device = qubit_limit_triplet();
  ScrpSolveOptions options;
  options.tolerance = 1e-6;
  const ScrpAmplitudeSolve solve = solve_scrp_amplitudes(device, 300e-9, 4e-9, options);
  CHECK(solve.residual <= 1e-6);
  CHECK(solve.psi1 == doctest::Approx(M_PI / 2.0).epsilon(1e-6));
  CHECK(solve.psi2 == doctest::Approx(M_PI / 2.0).epsilon(1e-6));
  CHECK(solve.evaluations <= 45);
  CHECK(std::abs(solve.omega1) / kTwoPi > 1e6);
  CHECK(std::abs(solve.omega1) / kTwoPi < 3e8);
  CHECK(std::abs(solve.omega2) / kTwoPi > 1e6);
  CHECK(std::abs(solve.omega2) / kTwoPi < 3e8);
}

TEST_CASE("amplitude solver reproduces the shipped calibration from a warm start") {
  const DeviceConfig device = paper_triplet();
  const ScrpAmplitudeSolve shipped = default_scrp_calibration();
  ScrpSolveOptions options;
  options.tolerance = 1e-6;
  options.initial = {shipped.omega1, shipped.omega2};
  const ScrpAmplitudeSolve solve = solve_scrp_amplitudes(device, 184.9e-9, 4e-9, options);
  CHECK(solve.residual <= 1e-6);
  CHECK(solve.evaluations <= 10);
  CHECK(std::abs(solve.omega1 - shipped.omega1) < 7e-3 * std::abs(shipped.omega1));
  CHECK(std::abs(solve.omega2 - shipped.omega2) < 7e-3 * std::abs(shipped.omega2));
}

TEST_CASE("dressed schedule at the shipped amplitudes realizes the parity gate") {
  const DeviceConfig device = paper_triplet();
  const ScrpAmplitudeSolve calib = default_scrp_calibration();
  const Schedule gate = build_scrp_schedule(device, 0, 2, 1, Complex(calib.omega1, 0.0),
                                            Complex(calib.omega2, 0.0), Complex(0.0, 0.0),
                                            184.9e-9, 4e-9, true);
  const PropagationResult prop = propagate(gate, device, 1e-11);
  const Dressing dressing = static_dressing(device, gate.frame_carrier());
  const Matrix projected =
      project_to_qubit_subspace(prop.unitary, device, dressing.basis).unitary;
  CHECK(phase_invariant_distance(projected, zparity_unitary()) < 2.5e-2);
}
