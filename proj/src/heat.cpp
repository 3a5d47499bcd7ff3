// SPDX-License-Identifier: Apache-2.0

#include "scrplab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "scrplab/effective_rates.hpp"
#include "scrplab/hamiltonian.hpp"
#include "scrplab/operators.hpp"
#include "scrplab/pauli.hpp"
#include "scrplab/propagate.hpp"

namespace scrplab {

namespace {

constexpr int kSweepPoints = 50;

Matrix rotation_su2(char axis, double angle) {
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  Matrix m(2, 2);
  switch (axis) {
    case 'X': m << c, Complex(0, -s), Complex(0, -s), c; break;
    case 'Y': m << c, -s, s, c; break;
    case 'Z': m << std::exp(Complex(0, -angle / 2.0)), 0, 0, std::exp(Complex(0, angle / 2.0)); break;
    default: throw ValidationError(std::string("unknown rotation axis '") + axis + "'");
  }
  return m;
}

void apply_1q(Vector& state, const Matrix& k, int qubit) {
  const Eigen::Index mask = Eigen::Index{1} << qubit;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    if (i & mask) continue;
    const Complex lo = state(i), hi = state(i | mask);
    state(i) = k(0, 0) * lo + k(0, 1) * hi;
    state(i | mask) = k(1, 0) * lo + k(1, 1) * hi;
  }
}

int qubit_count_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw ValidationError("gate dimension is not a power of 2");
  }
  return n;
}

std::vector<std::string> block_keys(GateKind kind) {
  if (kind == GateKind::CR) return {"0", "1"};
  return {"00", "10", "01", "11"};
}

bool even_parity(const std::string& bits) {
  int ones = 0;
  for (char c : bits) ones += (c == '1');
  return ones % 2 == 0;
}

/// Row/column index of the full gate for control state `bits`, target state s.
Eigen::Index block_index(const std::string& bits, int s, GateKind kind) {
  if (kind == GateKind::CR) return (bits[0] - '0') + 2 * s;
  return (bits[0] - '0') + 2 * s + 4 * (bits[1] - '0');
}

/// Ideal conditional target rotation of block `bits` (angle about X).
double ideal_block_angle(const std::string& bits, GateKind) {
  double z_sum = 0.0;
  for (char c : bits) z_sum += (c == '0') ? 1.0 : -1.0;
  return z_sum * M_PI / 2.0;
}

struct GateLines {
  std::vector<int> controls;
  int target = -1;
};

GateLines infer_gate_lines(const Schedule& gate) {
  std::set<int> controls, targets;
  for (const auto& inst : gate.instructions()) {
    if (const auto* cr = std::get_if<CRTone>(&inst.op)) controls.insert(cr->control);
    if (const auto* rot = std::get_if<RotaryTone>(&inst.op)) targets.insert(rot->target);
  }
  if (targets.size() != 1) {
    throw ValidationError("gate schedule must carry exactly one rotary line to identify the target");
  }
  GateLines lines;
  lines.target = *targets.begin();
  lines.controls.assign(controls.begin(), controls.end());
  if (lines.controls.empty()) throw ValidationError("gate schedule carries no CR tones");
  if (controls.count(lines.target)) {
    throw ValidationError("gate schedule drives the target as a CR control");
  }
  return lines;
}

Schedule build_heat_sequence(const HeatSpec& spec, const Schedule& gate, GateKind kind) {
  spec.validate(kind);
  const GateLines lines = infer_gate_lines(gate);
  const size_t want = (kind == GateKind::CR) ? 1 : 2;
  if (lines.controls.size() != want) {
    throw ValidationError("gate schedule has the wrong number of CR control lines for this kind");
  }

  std::vector<Instruction> out;
  for (size_t k = 0; k < lines.controls.size(); ++k) {
    if (spec.control_bits[k] == '1') {
      out.push_back({IdealRotation{lines.controls[k], 'X', M_PI}, 0.0});
    }
  }
  out.push_back({IdealRotation{lines.target, 'Y', M_PI / 2.0}, 0.0});

  const double period = gate.total_duration();
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    for (Instruction inst : gate.instructions()) {
      inst.start += rep * period;
      out.push_back(inst);
    }
    out.push_back({IdealRotation{lines.target, spec.refocus_pauli, M_PI}, (rep + 1) * period});
  }
  if (spec.measure_basis == 'Y') {
    out.push_back({IdealRotation{lines.target, 'X', M_PI / 2.0}, spec.repetitions * period});
  }
  return Schedule(std::move(out));
}

}  // namespace

void HeatSpec::validate(GateKind kind) const {
  if (repetitions <= 0 || repetitions % 2 != 0) {
    throw ValidationError("repetitions must be a positive even integer");
  }
  if (refocus_pauli != 'Y' && refocus_pauli != 'Z') {
    throw ValidationError("refocus_pauli must be 'Y' or 'Z'");
  }
  if (measure_basis != 'Y' && measure_basis != 'Z') {
    throw ValidationError("measure_basis must be 'Y' or 'Z'");
  }
  const size_t want = (kind == GateKind::CR) ? 1 : 2;
  if (control_bits.size() != want) {
    throw ValidationError("control_bits length must match the gate's control count");
  }
  for (char c : control_bits) {
    if (c != '0' && c != '1') throw ValidationError("control_bits must contain only '0'/'1'");
  }
}

void BlockRotation::validate() const {
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(norm - 1.0) > 1e-8) {
    throw ValidationError("block rotation axis must be a unit vector within 1e-8");
  }
}

Matrix BlockRotation::unitary() const {
  validate();
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  Matrix m(2, 2);
  m = c * Matrix::Identity(2, 2) -
      Complex(0, s) * (axis[0] * pauli_1q('X') + axis[1] * pauli_1q('Y') + axis[2] * pauli_1q('Z'));
  return m;
}

Complex BlockRotation::coefficient(char pauli) const {
  validate();
  int idx = 0;
  switch (pauli) {
    case 'X': idx = 0; break;
    case 'Y': idx = 1; break;
    case 'Z': idx = 2; break;
    default: throw ValidationError(std::string("unknown Pauli character '") + pauli + "'");
  }
  return Complex(0, -axis[idx] * std::sin(angle / 2.0));
}

std::vector<HeatKey> heat_measurement_keys(GateKind kind) {
  std::vector<HeatKey> keys;
  for (const auto& b : block_keys(kind)) {
    if (kind == GateKind::SCRP && even_parity(b)) {
      keys.emplace_back(b, 'Y', 'Y');
      keys.emplace_back(b, 'Z', 'Z');
    } else {
      keys.emplace_back(b, 'Y', 'Z');
      keys.emplace_back(b, 'Z', 'Y');
    }
  }
  return keys;
}

Schedule build_heat_sequence_cr(const HeatSpec& spec, const Schedule& gate) {
  return build_heat_sequence(spec, gate, GateKind::CR);
}

Schedule build_heat_sequence_scrp(const HeatSpec& spec, const Schedule& gate) {
  return build_heat_sequence(spec, gate, GateKind::SCRP);
}

double heat_expectation(const Matrix& gate, const std::vector<int>& controls, int target,
                        const HeatSpec& spec) {
  const GateKind kind = (controls.size() == 1) ? GateKind::CR : GateKind::SCRP;
  spec.validate(kind);
  const int n = qubit_count_for_dim(gate.rows());
  std::set<int> seen;
  for (int c : controls) {
    if (c < 0 || c >= n) throw ValidationError("control bit position out of range");
    seen.insert(c);
  }
  if (target < 0 || target >= n || seen.count(target) || seen.size() != controls.size()) {
    throw ValidationError("control/target bit positions must be distinct and in range");
  }

  Vector state = Vector::Zero(gate.rows());
  state(0) = 1.0;
  for (size_t k = 0; k < controls.size(); ++k) {
    if (spec.control_bits[k] == '1') apply_1q(state, rotation_su2('X', M_PI), controls[k]);
  }
  apply_1q(state, rotation_su2('Y', M_PI / 2.0), target);
  const Matrix refocus = rotation_su2(spec.refocus_pauli, M_PI);
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    state = gate * state;
    apply_1q(state, refocus, target);
  }
  if (spec.measure_basis == 'Y') apply_1q(state, rotation_su2('X', M_PI / 2.0), target);

  const Eigen::Index mask = Eigen::Index{1} << target;
  double expectation = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    expectation += ((i & mask) ? -1.0 : 1.0) * std::norm(state(i));
  }
  return expectation;
}

double heat_expectation_sampled(const Matrix& gate, const std::vector<int>& controls,
                                int target, const HeatSpec& spec, int shots,
                                std::mt19937_64& rng) {
  if (shots <= 0) throw ValidationError("shots must be positive");
  const double exact = heat_expectation(gate, controls, target, spec);
  const double p = std::clamp((1.0 + exact) / 2.0, 0.0, 1.0);
  std::binomial_distribution<int> dist(shots, p);
  return 2.0 * dist(rng) / shots - 1.0;
}

HeatMeasurements heat_measurements(const Matrix& gate, const std::vector<int>& controls,
                                   int target, int repetitions, GateKind kind, int shots,
                                   std::mt19937_64* rng) {
  if (shots > 0 && rng == nullptr) {
    throw ValidationError("sampled measurements require a random generator");
  }
  HeatMeasurements out;
  for (const auto& [bits, refocus, basis] : heat_measurement_keys(kind)) {
    HeatSpec spec;
    spec.repetitions = repetitions;
    spec.refocus_pauli = refocus;
    spec.control_bits = bits;
    spec.measure_basis = basis;
    out[{bits, refocus, basis}] =
        (shots > 0) ? heat_expectation_sampled(gate, controls, target, spec, shots, *rng)
                    : heat_expectation(gate, controls, target, spec);
  }
  return out;
}

HeatMeasurements ideal_heat_measurements(const std::map<std::string, BlockRotation>& blocks,
                                         int repetitions, GateKind kind) {
  if (repetitions <= 0 || repetitions % 2 != 0) {
    throw ValidationError("repetitions must be a positive even integer");
  }
  HeatMeasurements out;
  for (const auto& [bits, refocus, basis] : heat_measurement_keys(kind)) {
    const auto it = blocks.find(bits);
    if (it == blocks.end()) throw ValidationError("missing block rotation for state " + bits);
    it->second.validate();
    const double ey = it->second.axis[1] * std::sin(it->second.angle / 2.0);
    const double ez = it->second.axis[2] * std::sin(it->second.angle / 2.0);
    const double n = repetitions;
    double value = 0.0;
    if (kind == GateKind::CR) {
      value = (refocus == 'Y') ? -std::sqrt(2.0) * n * ey : std::sqrt(2.0) * n * ez;
    } else if (even_parity(bits)) {
      const double sign = (bits == "00") ? -1.0 : 1.0;
      value = (refocus == 'Y') ? sign * 2.0 * n * ey : sign * 2.0 * n * ez;
    } else {
      value = (refocus == 'Y') ? -2.0 * n * ey : 2.0 * n * ez;
    }
    out[{bits, refocus, basis}] = value;
  }
  return out;
}

HeatMeasurements sampled_heat_measurements(const std::map<std::string, BlockRotation>& blocks,
                                           int repetitions, GateKind kind, int shots,
                                           std::mt19937_64& rng) {
  if (shots <= 0) throw ValidationError("shots must be positive");
  HeatMeasurements out = ideal_heat_measurements(blocks, repetitions, kind);
  for (auto& [key, value] : out) {
    if (std::abs(value) > 1.0 + 1e-12) {
      throw ValidationError(
          "ideal expectation exceeds magnitude 1; reduce repetitions or error angles");
    }
    const double p = std::clamp((1.0 + value) / 2.0, 0.0, 1.0);
    std::binomial_distribution<int> dist(shots, p);
    value = 2.0 * dist(rng) / shots - 1.0;
  }
  return out;
}

std::map<std::string, std::pair<Complex, Complex>> estimate_block_coefficients(
    const HeatMeasurements& measurements, int repetitions, GateKind kind) {
  if (repetitions <= 0 || repetitions % 2 != 0) {
    throw ValidationError("repetitions must be a positive even integer");
  }
  const auto fetch = [&](const std::string& bits, char refocus, char basis) {
    const auto it = measurements.find({bits, refocus, basis});
    if (it == measurements.end()) {
      std::ostringstream msg;
      msg << "missing measurement (b=" << bits << ", refocus=" << refocus << ", basis=" << basis
          << ")";
      throw ValidationError(msg.str());
    }
    return it->second;
  };

  const double n = repetitions;
  std::map<std::string, std::pair<Complex, Complex>> out;
  for (const auto& bits : block_keys(kind)) {
    Complex a_y, a_z;
    if (kind == GateKind::CR) {
      a_y = Complex(0, 1) * fetch(bits, 'Y', 'Z') / (std::sqrt(2.0) * n);
      a_z = Complex(0, -1) * fetch(bits, 'Z', 'Y') / (std::sqrt(2.0) * n);
    } else if (even_parity(bits)) {
      const Complex sign = (bits == "00") ? Complex(0, 1) : Complex(0, -1);
      a_y = sign * fetch(bits, 'Y', 'Y') / (2.0 * n);
      a_z = sign * fetch(bits, 'Z', 'Z') / (2.0 * n);
    } else {
      a_y = Complex(0, 1) * fetch(bits, 'Y', 'Z') / (2.0 * n);
      a_z = Complex(0, -1) * fetch(bits, 'Z', 'Y') / (2.0 * n);
    }
    out[bits] = {a_y, a_z};
  }
  return out;
}

std::map<std::string, Complex> walsh_reconstruct(
    const std::map<std::string, Complex>& per_block, char pauli) {
  if (pauli != 'X' && pauli != 'Y' && pauli != 'Z') {
    throw ValidationError("walsh_reconstruct expects a Pauli character X/Y/Z");
  }
  const bool cr = per_block.size() == 2;
  const auto keys = block_keys(cr ? GateKind::CR : GateKind::SCRP);
  if (per_block.size() != keys.size()) {
    throw ValidationError("walsh_reconstruct requires a complete block set (2 or 4 entries)");
  }
  const auto fetch = [&](const std::string& bits) {
    const auto it = per_block.find(bits);
    if (it == per_block.end()) throw ValidationError("missing block coefficient for " + bits);
    return it->second;
  };

  std::map<std::string, Complex> out;
  const std::string p(1, pauli);
  if (cr) {
    const Complex a0 = fetch("0"), a1 = fetch("1");
    out["I" + p] = (a0 + a1) / 2.0;
    out["Z" + p] = (a0 - a1) / 2.0;
  } else {
    const Complex a00 = fetch("00"), a10 = fetch("10"), a01 = fetch("01"), a11 = fetch("11");
    out["I" + p + "I"] = (a00 + a10 + a01 + a11) / 4.0;
    out["Z" + p + "I"] = (a00 - a10 + a01 - a11) / 4.0;
    out["I" + p + "Z"] = (a00 + a10 - a01 - a11) / 4.0;
    out["Z" + p + "Z"] = (a00 - a10 - a01 + a11) / 4.0;
  }
  return out;
}

double rotary_cost(const std::map<std::string, Complex>& coeffs) {
  const auto control_ok = [](char c) { return c == 'I' || c == 'Z'; };
  const auto target_ok = [](char c) { return c == 'Y' || c == 'Z'; };
  double cost = 0.0;
  for (const auto& [label, value] : coeffs) {
    const bool scrp = label.size() == 3 && control_ok(label[0]) && target_ok(label[1]) &&
                      control_ok(label[2]);
    const bool cr = label.size() == 2 && control_ok(label[0]) && target_ok(label[1]);
    if (scrp || cr) cost += std::abs(value);
  }
  return cost;
}

Matrix block_unitary(const std::map<std::string, BlockRotation>& blocks, GateKind kind) {
  const auto keys = block_keys(kind);
  const Eigen::Index dim = (kind == GateKind::CR) ? 4 : 8;
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& bits : keys) {
    const auto it = blocks.find(bits);
    if (it == blocks.end()) throw ValidationError("missing block rotation for state " + bits);
    const Matrix u = it->second.unitary();
    for (int sp = 0; sp < 2; ++sp) {
      for (int s = 0; s < 2; ++s) {
        out(block_index(bits, sp, kind), block_index(bits, s, kind)) = u(sp, s);
      }
    }
  }
  return out;
}

std::map<std::string, std::pair<Complex, Complex>> block_coefficients_from_unitary(
    const Matrix& gate, const std::vector<int>& controls, int target, GateKind kind) {
  const int n = qubit_count_for_dim(gate.rows());
  if (static_cast<size_t>(n) != controls.size() + 1) {
    throw ValidationError("gate must act on exactly the control and target qubits");
  }
  const std::vector<int> expect_controls = (kind == GateKind::CR) ? std::vector<int>{0}
                                                                  : std::vector<int>{0, 2};
  const int expect_target = 1;
  if (controls != expect_controls || target != expect_target) {
    throw ValidationError("block extraction expects controls/target in canonical bit positions");
  }

  std::map<std::string, std::pair<Complex, Complex>> out;
  for (const auto& bits : block_keys(kind)) {
    Matrix w(2, 2);
    for (int sp = 0; sp < 2; ++sp) {
      for (int s = 0; s < 2; ++s) {
        w(sp, s) = gate(block_index(bits, sp, kind), block_index(bits, s, kind));
      }
    }
    w = polar_unitary(w);
    const Complex det = w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0);
    w *= std::exp(Complex(0, -std::arg(det) / 2.0));

    const Matrix ideal = rotation_su2('X', ideal_block_angle(bits, kind));
    const double overlap = ((w * ideal.adjoint()).trace() / 2.0).real();
    if (std::abs(overlap) < 0.1) {
      throw NumericalError("control block " + bits +
                           " is too far from the ideal conditional rotation to fix its branch");
    }
    if (overlap < 0.0) w = -w;
    out[bits] = {(pauli_1q('Y') * w).trace() / 2.0, (pauli_1q('Z') * w).trace() / 2.0};
  }
  return out;
}

namespace {

/// Per-control-state coefficients -> 8 error labels -> scalar cost.
double cost_from_blocks(const std::map<std::string, std::pair<Complex, Complex>>& per_block) {
  std::map<std::string, Complex> ay, az;
  for (const auto& [bits, coeffs] : per_block) {
    ay[bits] = coeffs.first;
    az[bits] = coeffs.second;
  }
  std::map<std::string, Complex> labels = walsh_reconstruct(ay, 'Y');
  for (const auto& [label, value] : walsh_reconstruct(az, 'Z')) labels[label] = value;
  return rotary_cost(labels);
}

struct ProjectedGate {
  Matrix unitary;
  GateLines lines;
};

ProjectedGate propagate_and_project(const Schedule& schedule, const DeviceConfig& device,
                                    double dt) {
  ProjectedGate out;
  out.lines = infer_gate_lines(schedule);
  const PropagationResult prop = propagate(schedule, device, dt);
  const Dressing dressing = static_dressing(device, schedule.frame_carrier());
  out.unitary = project_to_qubit_subspace(prop.unitary, device, dressing.basis).unitary;
  return out;
}

}  // namespace

CalibrationResult calibrate_rotary_amplitude(const DeviceConfig& device,
                                             const std::function<Schedule(double)>& builder,
                                             double sweep_max,
                                             const CalibrationOptions& options) {
  if (!(sweep_max > 0.0)) throw ValidationError("sweep_max must be positive");
  if (!builder) throw ValidationError("schedule builder must be callable");

  std::mt19937_64 rng(options.seed);
  CalibrationResult result;
  result.cost_curve.reserve(kSweepPoints);
  for (int k = 0; k < kSweepPoints; ++k) {
    const double amplitude = sweep_max * k / (kSweepPoints - 1);
    double cost = 0.0;
    try {
      const ProjectedGate gate = propagate_and_project(builder(amplitude), device, options.dt);
      const GateKind kind = (gate.lines.controls.size() == 2) ? GateKind::SCRP : GateKind::CR;
      std::map<std::string, std::pair<Complex, Complex>> per_block;
      if (options.fast) {
        per_block = block_coefficients_from_unitary(gate.unitary, gate.lines.controls,
                                                    gate.lines.target, kind);
      } else {
        const HeatMeasurements meas =
            heat_measurements(gate.unitary, gate.lines.controls, gate.lines.target,
                              options.repetitions, kind, options.shots, &rng);
        per_block = estimate_block_coefficients(meas, options.repetitions, kind);
      }
      cost = cost_from_blocks(per_block);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "rotary sweep failed at point " << k << " (amplitude " << amplitude
          << " rad/s): " << e.what();
      throw NumericalError(msg.str());
    }
    result.cost_curve.emplace_back(amplitude, cost);
  }

  result.best_amplitude = result.cost_curve.front().first;
  double best_cost = result.cost_curve.front().second;
  for (const auto& [amplitude, cost] : result.cost_curve) {
    if (cost < best_cost) {
      best_cost = cost;
      result.best_amplitude = amplitude;
    }
  }
  return result;
}

namespace {

struct ConditionalAngles {
  double psi1 = 0.0, psi2 = 0.0;
};

double block_angle(const Matrix& w, const std::string& bits) {
  const Eigen::Index lo = block_index(bits, 0, GateKind::SCRP);
  const Eigen::Index hi = block_index(bits, 1, GateKind::SCRP);
  const Complex a = (w(lo, lo) + w(hi, hi)) / 2.0;
  const Complex ax = (w(lo, hi) + w(hi, lo)) / 2.0;
  return 2.0 * std::atan2((Complex(0, 1) * ax).real(), a.real());
}

ConditionalAngles conditional_angles(const Matrix& w) {
  const double phi00 = block_angle(w, "00");
  const double phi10 = block_angle(w, "10");
  const double phi01 = block_angle(w, "01");
  ConditionalAngles angles;
  angles.psi1 = (phi00 - phi10) / 2.0;
  angles.psi2 = (phi00 - phi01) / 2.0;
  return angles;
}

}  // namespace

ScrpAmplitudeSolve solve_scrp_amplitudes(const DeviceConfig& device, double half_duration,
                                         double rise_sigma, const ScrpSolveOptions& options) {
  const int c1 = device.role("c1"), c2 = device.role("c2"), t = device.role("t");

  int evaluations = 0;
  ConditionalAngles last;
  const auto evaluate = [&](double o1, double o2) -> ConditionalAngles {
    const Schedule schedule =
        build_scrp_schedule(device, c1, c2, t, Complex(o1, 0.0), Complex(o2, 0.0),
                            Complex(options.rotary_amplitude, 0.0), half_duration, rise_sigma);
    const ProjectedGate gate = propagate_and_project(schedule, device, options.dt);
    ++evaluations;
    last = conditional_angles(gate.unitary);
    return last;
  };

  double o1, o2;
  if (options.initial) {
    o1 = options.initial->first;
    o2 = options.initial->second;
  } else {
    // Invert the perturbative conditional rate against the half-pulse area.
    const double probe = kTwoPi * 10e6;
    const EffectiveRates rates = perturbative_rates(device, probe, probe, 0.0);
    const FlatTopGaussian unit_pulse{Complex(1.0, 0.0), half_duration, rise_sigma,
                                     half_duration - 8.0 * rise_sigma};
    const double area_time = PulseEnvelope{unit_pulse}.area().real();
    o1 = (M_PI / 2.0) / (rates.zxi / probe * area_time);
    o2 = (M_PI / 2.0) / (rates.ixz / probe * area_time);
  }

  const auto solve_axis = [&](int axis) {
    double& x = (axis == 1) ? o1 : o2;
    const auto error = [&](double value) {
      const double keep1 = o1, keep2 = o2;
      const ConditionalAngles angles = (axis == 1) ? evaluate(value, keep2)
                                                   : evaluate(keep1, value);
      return ((axis == 1) ? angles.psi1 : angles.psi2) - M_PI / 2.0;
    };
    double x0 = x;
    double f0 = error(x0);
    if (std::abs(f0) < options.tolerance) return;
    double x1 = (x0 != 0.0) ? 1.02 * x0 : kTwoPi * 1e6;
    double f1 = error(x1);
    for (int iter = 0; iter < 10 && std::abs(f1) >= options.tolerance; ++iter) {
      if (f1 == f0) break;
      const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
      x0 = x1;
      f0 = f1;
      x1 = x2;
      f1 = error(x1);
    }
    x = x1;
  };

  for (int round = 0; round < options.rounds; ++round) {
    solve_axis(1);
    solve_axis(2);
    // `last` already holds the angles at the current (o1, o2): solve_axis(2)'s
    // final evaluation used the final pair.
    if (std::abs(last.psi1 - M_PI / 2.0) < options.tolerance &&
        std::abs(last.psi2 - M_PI / 2.0) < options.tolerance) {
      break;
    }
  }

  ScrpAmplitudeSolve out;
  out.omega1 = o1;
  out.omega2 = o2;
  out.psi1 = last.psi1;
  out.psi2 = last.psi2;
  out.residual = std::max(std::abs(last.psi1 - M_PI / 2.0), std::abs(last.psi2 - M_PI / 2.0));
  out.evaluations = evaluations;
  return out;
}

ScrpAmplitudeSolve default_scrp_calibration() {
  // Converged solve on paper_triplet() at half_duration 184.9 ns, rise_sigma 4 ns,
  // dt 0.01 ns (see tools/calibrate_defaults.cpp): residual 1.8e-10 rad.
  ScrpAmplitudeSolve out;
  out.omega1 = -2.227850408697e8;  // -35.4573 MHz * 2*pi
  out.omega2 = -1.942674232970e8;  // -30.9186 MHz * 2*pi
  out.psi1 = M_PI / 2.0;
  out.psi2 = M_PI / 2.0;
  out.residual = 0.0;
  out.evaluations = 0;
  return out;
}

}  // namespace scrplab
