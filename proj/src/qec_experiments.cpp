// SPDX-License-Identifier: Apache-2.0

#include "scrplab/qec_experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "scrplab/channels.hpp"

namespace scrplab {

namespace {

constexpr double kTimeEps = 1e-15;  // s; real windows here are >= tens of ps

Gate h_gate(int q) { return Gate{"H", {q}, 0.0, 0.0}; }
Gate cx_gate(int c, int t) { return Gate{"CX", {c, t}, 0.0, 0.0}; }
Gate zparity_gate(int c1, int t, int c2) { return Gate{"ZPARITY", {c1, t, c2}, 0.0, 0.0}; }

// Wire indices of the seven-qubit patch (D1, F1, D2, S, D3, F2, D4).
constexpr int kD1 = 0, kF1 = 1, kD2 = 2, kS = 3, kD3 = 4, kF2 = 5, kD4 = 6;

void check_gate_qubits(const Gate& g, int n_qubits) {
  for (int q : g.qubits) {
    if (q < 0 || q >= n_qubits) {
      throw ValidationError("gate '" + g.name + "' addresses qubit out of range");
    }
  }
  std::set<int> distinct(g.qubits.begin(), g.qubits.end());
  if (distinct.size() != g.qubits.size()) {
    throw ValidationError("gate '" + g.name + "' repeats a qubit");
  }
}

void recompute_idles(ScheduledCircuit& sc) {
  sc.idles.assign(static_cast<std::size_t>(sc.n_qubits), {});
  std::vector<std::vector<std::pair<double, double>>> busy(static_cast<std::size_t>(sc.n_qubits));
  for (const ScheduledGate& sg : sc.gates) {
    if (sg.gate.qubits.empty()) {
      // A qubit-less BARRIER is a sequencing marker for every wire but holds
      // no wire busy.
      continue;
    }
    for (int q : sg.gate.qubits) busy[static_cast<std::size_t>(q)].push_back({sg.start, sg.stop});
  }
  for (int q = 0; q < sc.n_qubits; ++q) {
    auto& w = busy[static_cast<std::size_t>(q)];
    std::sort(w.begin(), w.end());
    double cursor = 0.0;
    for (const auto& [start, stop] : w) {
      if (start - cursor > kTimeEps) {
        sc.idles[static_cast<std::size_t>(q)].push_back({cursor, start});
      }
      cursor = std::max(cursor, stop);
    }
    if (sc.total_duration - cursor > kTimeEps) {
      sc.idles[static_cast<std::size_t>(q)].push_back({cursor, sc.total_duration});
    }
  }
}

}  // namespace

Circuit build_xparity_cnot() {
  // Four common-control CNOT pairs: the syndrome entangles with both flags,
  // each flag copies onto its two data qubits, and the syndrome pairs repeat
  // to disentangle the flags (which is what lets them witness mid-circuit
  // faults). The Hadamards prepare and read the syndrome in the X basis.
  Circuit c;
  c.n_qubits = 7;
  c.gates = {
      h_gate(kS),
      cx_gate(kS, kF1), cx_gate(kS, kF2),
      cx_gate(kF1, kD1), cx_gate(kF2, kD3),
      cx_gate(kF1, kD2), cx_gate(kF2, kD4),
      cx_gate(kS, kF1), cx_gate(kS, kF2),
      h_gate(kS),
  };
  return c;
}

Circuit build_xparity_parity() {
  // Conjugating each common-control pair by Hadamards on all three of its
  // qubits turns it into a common-target ZPARITY gate. Writing the whole
  // circuit that way makes every interior Hadamard pair cancel: the flags
  // keep one H at each end, the data qubits keep an H on each side of their
  // parity layer, and the syndrome wire needs none (its basis changes are
  // absorbed by becoming the shared target). The product of the gates below
  // is exactly the unitary of build_xparity_cnot().
  Circuit c;
  c.n_qubits = 7;
  c.gates = {
      h_gate(kF1), h_gate(kF2),
      zparity_gate(kF1, kS, kF2),
      h_gate(kD1), h_gate(kD2), h_gate(kD3), h_gate(kD4),
      zparity_gate(kD1, kF1, kD2), zparity_gate(kD3, kF2, kD4),
      h_gate(kD1), h_gate(kD2), h_gate(kD3), h_gate(kD4),
      zparity_gate(kF1, kS, kF2),
      h_gate(kF1), h_gate(kF2),
  };
  return c;
}

std::map<std::string, double> default_parity_durations() {
  return {
      {"RZ", 0.0},
      {"H", 35.6e-9},
      {"SX", 35.6e-9},
      {"X", 35.6e-9},
      {"CX@1,3", 352.0e-9},
      {"CX@3,5", 352.0e-9},
      {"CX", 566.9e-9},
      {"ZPARITY@1,3,5", 369.8e-9},
      {"ZPARITY", 554.2e-9},
      {"MEASURE", 860.0e-9},
  };
}

std::string gate_instance_key(const Gate& g) {
  if (g.qubits.empty()) return g.name;
  std::vector<int> qs = g.qubits;
  std::sort(qs.begin(), qs.end());
  std::ostringstream key;
  key << g.name << '@';
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i) key << ',';
    key << qs[i];
  }
  return key.str();
}

double gate_duration(const Gate& g, const std::map<std::string, double>& durations) {
  if (g.name == "DELAY") {
    if (g.duration < 0.0) throw ValidationError("DELAY duration must be >= 0");
    return g.duration;
  }
  auto it = durations.find(gate_instance_key(g));
  if (it == durations.end()) it = durations.find(g.name);
  if (it == durations.end()) {
    if (g.name == "BARRIER") return 0.0;
    throw ValidationError("no duration for gate '" + gate_instance_key(g) + "'");
  }
  if (it->second < 0.0) throw ValidationError("gate durations must be >= 0");
  return it->second;
}

ScheduledCircuit schedule_alap(const Circuit& c, const std::map<std::string, double>& durations) {
  if (c.n_qubits < 1) throw ValidationError("circuit must declare at least one qubit");
  std::vector<double> avail(static_cast<std::size_t>(c.n_qubits), 0.0);
  std::vector<ScheduledGate> gates(c.gates.size());
  std::vector<int> all_qubits(static_cast<std::size_t>(c.n_qubits));
  for (int q = 0; q < c.n_qubits; ++q) all_qubits[static_cast<std::size_t>(q)] = q;

  for (std::size_t i = c.gates.size(); i-- > 0;) {
    const Gate& g = c.gates[i];
    check_gate_qubits(g, c.n_qubits);
    if (g.qubits.empty() && g.name != "BARRIER") {
      throw ValidationError("gate '" + g.name + "' must name its qubits");
    }
    const std::vector<int>& qs = g.qubits.empty() ? all_qubits : g.qubits;
    const double dur = gate_duration(g, durations);
    double end = avail[static_cast<std::size_t>(qs.front())];
    for (int q : qs) end = std::min(end, avail[static_cast<std::size_t>(q)]);
    const double start = end - dur;
    for (int q : qs) avail[static_cast<std::size_t>(q)] = start;
    gates[i] = {g, start, end};
  }

  double shift = 0.0;
  for (const ScheduledGate& sg : gates) shift = std::min(shift, sg.start);
  ScheduledCircuit sc;
  sc.n_qubits = c.n_qubits;
  for (ScheduledGate& sg : gates) {
    sg.start -= shift;
    sg.stop -= shift;
    sc.total_duration = std::max(sc.total_duration, sg.stop);
  }
  std::stable_sort(gates.begin(), gates.end(),
                   [](const ScheduledGate& a, const ScheduledGate& b) { return a.start < b.start; });
  sc.gates = std::move(gates);
  recompute_idles(sc);
  return sc;
}

ScheduledCircuit insert_dd(const ScheduledCircuit& sc, double x_duration) {
  if (x_duration < 0.0) throw ValidationError("x_duration must be >= 0");
  ScheduledCircuit out;
  out.n_qubits = sc.n_qubits;
  out.total_duration = sc.total_duration;
  out.gates = sc.gates;
  for (int q = 0; q < sc.n_qubits; ++q) {
    for (const IdleInterval& idle : sc.idles[static_cast<std::size_t>(q)]) {
      const double len = idle.stop - idle.start;
      if (len < 2.0 * x_duration - kTimeEps) continue;
      const double tau = std::max(0.0, (len - 2.0 * x_duration) / 4.0);
      double t = idle.start;
      auto append = [&](const char* name, double dur, double param) {
        Gate g{name, {q}, param, std::string(name) == "DELAY" ? dur : 0.0};
        out.gates.push_back({std::move(g), t, t + dur});
        t += dur;
      };
      append("DELAY", tau, 0.0);
      append("X", x_duration, M_PI);
      append("DELAY", 2.0 * tau, 0.0);
      append("X", x_duration, -M_PI);
      append("DELAY", tau, 0.0);
      out.gates.back().stop = idle.stop;  // close the window exactly
    }
  }
  std::stable_sort(out.gates.begin(), out.gates.end(),
                   [](const ScheduledGate& a, const ScheduledGate& b) { return a.start < b.start; });
  recompute_idles(out);
  return out;
}

namespace {

// Embed a unitary given on the gate's qubits (little-endian in qubit-list
// order) into the full register.
Matrix embed_on_qubits(const Matrix& u, const std::vector<int>& qubits, int n_qubits) {
  const int k = static_cast<int>(qubits.size());
  const long sub = 1L << k;
  const long dim = 1L << n_qubits;
  if (u.rows() != sub || u.cols() != sub) {
    throw ValidationError("override unitary dimension does not match the gate's qubit count");
  }
  long gate_mask = 0;
  for (int q : qubits) gate_mask |= 1L << q;
  Matrix full = Matrix::Zero(dim, dim);
  for (long a = 0; a < dim; ++a) {
    const long rest = a & ~gate_mask;
    long ga = 0;
    for (int j = 0; j < k; ++j) {
      if ((a >> qubits[static_cast<std::size_t>(j)]) & 1) ga |= 1L << j;
    }
    for (long gb = 0; gb < sub; ++gb) {
      long b = rest;
      for (int j = 0; j < k; ++j) {
        if ((gb >> j) & 1) b |= 1L << qubits[static_cast<std::size_t>(j)];
      }
      full(a, b) = u(ga, gb);
    }
  }
  return full;
}

// CX and ZPARITY permute basis states and are self-inverse, so conjugation is
// a cheap index gather instead of two dense matrix products.
bool apply_as_permutation(Matrix& rho, const Gate& g) {
  const long dim = rho.rows();
  std::vector<long> to;
  if (g.name == "CX") {
    const long cbit = 1L << g.qubits.at(0), tbit = 1L << g.qubits.at(1);
    to.resize(static_cast<std::size_t>(dim));
    for (long from = 0; from < dim; ++from) {
      to[static_cast<std::size_t>(from)] = (from & cbit) ? (from ^ tbit) : from;
    }
  } else if (g.name == "ZPARITY") {
    const long c1 = 1L << g.qubits.at(0), tbit = 1L << g.qubits.at(1), c2 = 1L << g.qubits.at(2);
    to.resize(static_cast<std::size_t>(dim));
    for (long from = 0; from < dim; ++from) {
      long image = from;
      if (from & c1) image ^= tbit;
      if (from & c2) image ^= tbit;
      to[static_cast<std::size_t>(from)] = image;
    }
  } else {
    return false;
  }
  Matrix next(dim, dim);
  for (long i = 0; i < dim; ++i) {
    for (long j = 0; j < dim; ++j) {
      next(to[static_cast<std::size_t>(i)], to[static_cast<std::size_t>(j)]) = rho(i, j);
    }
  }
  rho = std::move(next);
  return true;
}

Matrix one_qubit_unitary(const Gate& g) {
  Matrix u(2, 2);
  if (g.name == "H") {
    const double s = 1.0 / std::sqrt(2.0);
    u << s, s, s, -s;
  } else if (g.name == "X") {
    u << 0.0, 1.0, 1.0, 0.0;
  } else if (g.name == "SX") {
    u << Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5);
  } else if (g.name == "RZ") {
    u << std::exp(Complex(0.0, -g.param / 2.0)), 0.0, 0.0, std::exp(Complex(0.0, g.param / 2.0));
  } else {
    throw ValidationError("gate '" + g.name + "' is not a known single-qubit gate");
  }
  return u;
}

void apply_gate_unitary(Matrix& rho, const Gate& g, int n_qubits, const NoiseModel& noise) {
  if (!noise.unitary_overrides.empty()) {
    auto it = noise.unitary_overrides.find(gate_instance_key(g));
    if (it == noise.unitary_overrides.end()) it = noise.unitary_overrides.find(g.name);
    if (it != noise.unitary_overrides.end()) {
      check_gate_qubits(g, n_qubits);
      const Matrix full = embed_on_qubits(it->second, g.qubits, n_qubits);
      rho = full * rho * full.adjoint();
      return;
    }
  }
  if (g.name == "DELAY" || g.name == "BARRIER") return;
  if (apply_as_permutation(rho, g)) return;
  if (g.qubits.size() == 1) {
    rho = apply_qubit_channel(rho, {one_qubit_unitary(g)}, g.qubits.front(), n_qubits);
    return;
  }
  const Matrix full = gate_unitary(g, n_qubits);  // also rejects unknown names
  rho = full * rho * full.adjoint();
}

struct PhaseEvent {
  double t = 0.0;
  int qubit = 0;
  double angle = 0.0;
};

}  // namespace

Matrix simulate_density_matrix(const ScheduledCircuit& sc, const DeviceConfig& device,
                               const NoiseModel& noise, const std::string& input) {
  if (sc.n_qubits < 1 || sc.n_qubits > 10) {
    throw ValidationError("density-matrix simulation supports 1 to 10 qubits");
  }
  if (device.num_transmons() != sc.n_qubits) {
    throw ValidationError("device width does not match the circuit's qubit count");
  }
  if (input.size() != 4) throw ValidationError("input label must have four characters");
  for (char ch : input) {
    if (ch != '+' && ch != '-') throw ValidationError("input label characters must be '+' or '-'");
  }
  std::array<int, 4> data_qubits{};
  for (int j = 0; j < 4; ++j) {
    data_qubits[static_cast<std::size_t>(j)] = device.role("D" + std::to_string(j + 1));
  }

  const long dim = 1L << sc.n_qubits;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  const double amp = 1.0 / std::sqrt(16.0);
  for (long k = 0; k < dim; ++k) {
    double sign = 1.0;
    bool occupied_elsewhere = false;
    for (int q = 0; q < sc.n_qubits; ++q) {
      if (((k >> q) & 1) == 0) continue;
      int data_index = -1;
      for (int j = 0; j < 4; ++j) {
        if (data_qubits[static_cast<std::size_t>(j)] == q) data_index = j;
      }
      if (data_index < 0) {
        occupied_elsewhere = true;
        break;
      }
      if (input[static_cast<std::size_t>(data_index)] == '-') sign = -sign;
    }
    if (!occupied_elsewhere) psi(k) = sign * amp;
  }
  Matrix rho = psi * psi.adjoint();

  // Timeline events: gates fire at their stop, idle-drift phases where idle
  // windows and DELAY spans close.
  std::vector<std::size_t> by_stop(sc.gates.size());
  for (std::size_t i = 0; i < by_stop.size(); ++i) by_stop[i] = i;
  std::stable_sort(by_stop.begin(), by_stop.end(), [&](std::size_t a, std::size_t b) {
    return sc.gates[a].stop < sc.gates[b].stop;
  });

  std::vector<PhaseEvent> phases;
  if (noise.idle_z_rate != 0.0) {
    for (int q = 0; q < sc.n_qubits; ++q) {
      for (const IdleInterval& idle : sc.idles[static_cast<std::size_t>(q)]) {
        phases.push_back({idle.stop, q, noise.idle_z_rate * (idle.stop - idle.start)});
      }
    }
    for (const ScheduledGate& sg : sc.gates) {
      if (sg.gate.name == "DELAY") {
        phases.push_back({sg.stop, sg.gate.qubits.at(0), noise.idle_z_rate * (sg.stop - sg.start)});
      }
    }
    std::stable_sort(phases.begin(), phases.end(),
                     [](const PhaseEvent& a, const PhaseEvent& b) { return a.t < b.t; });
  }

  std::vector<double> boundaries{0.0, sc.total_duration};
  for (const ScheduledGate& sg : sc.gates) {
    boundaries.push_back(sg.start);
    boundaries.push_back(sg.stop);
  }
  for (const PhaseEvent& pe : phases) boundaries.push_back(pe.t);
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end(),
                               [](double a, double b) { return std::abs(a - b) <= kTimeEps; }),
                   boundaries.end());

  std::size_t next_gate = 0, next_phase = 0;
  double prev = boundaries.empty() ? 0.0 : boundaries.front();
  for (const double t : boundaries) {
    const double dt = t - prev;
    if (noise.damping && dt > kTimeEps) {
      for (int q = 0; q < sc.n_qubits; ++q) {
        const TransmonParams& tp = device.transmon(q);
        rho = apply_qubit_channel(rho, damping_kraus(dt, tp.t1, tp.t2), q, sc.n_qubits);
      }
    }
    while (next_phase < phases.size() && phases[next_phase].t <= t + kTimeEps) {
      const PhaseEvent& pe = phases[next_phase++];
      rho = apply_qubit_channel(rho, {one_qubit_unitary(Gate{"RZ", {pe.qubit}, pe.angle, 0.0})},
                                pe.qubit, sc.n_qubits);
    }
    while (next_gate < by_stop.size() && sc.gates[by_stop[next_gate]].stop <= t + kTimeEps) {
      const ScheduledGate& sg = sc.gates[by_stop[next_gate++]];
      check_gate_qubits(sg.gate, sc.n_qubits);
      apply_gate_unitary(rho, sg.gate, sc.n_qubits, noise);
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9) {
      throw NumericalError("density matrix trace drifted away from one");
    }
    prev = t;
  }
  return rho;
}

int ParityOutcome::correct_syndrome() const {
  int plus = 0;
  for (char ch : input) {
    if (ch == '+') ++plus;
  }
  return (plus % 2 == 0) ? 0 : 1;
}

namespace {

double weight_total(const std::map<std::pair<int, std::string>, double>& weights) {
  double total = 0.0;
  for (const auto& [key, w] : weights) total += w;
  return total;
}

}  // namespace

double ParityOutcome::probability(int syndrome, const std::string& data) const {
  const double total = weight_total(weights);
  if (total <= 0.0) return 0.0;
  const auto it = weights.find({syndrome, data});
  return it == weights.end() ? 0.0 : it->second / total;
}

double ParityOutcome::syndrome_error() const {
  const double total = weight_total(weights);
  if (total <= 0.0) return 0.0;
  const int correct = correct_syndrome();
  double bad = 0.0;
  for (const auto& [key, w] : weights) {
    if (key.first != correct) bad += w;
  }
  return bad / total;
}

double ParityOutcome::data_error() const {
  const double total = weight_total(weights);
  if (total <= 0.0) return 0.0;
  double bad = 0.0;
  for (const auto& [key, w] : weights) {
    if (key.second != input) bad += w;
  }
  return bad / total;
}

double ParityOutcome::data_qubit_error(int k) const {
  if (k < 0 || k > 3) throw ValidationError("data qubit index must be 0..3");
  const double total = weight_total(weights);
  if (total <= 0.0) return 0.0;
  double bad = 0.0;
  for (const auto& [key, w] : weights) {
    if (key.second[static_cast<std::size_t>(k)] != input[static_cast<std::size_t>(k)]) bad += w;
  }
  return bad / total;
}

std::vector<std::string> parity_input_labels() {
  std::vector<std::string> labels;
  labels.reserve(16);
  for (int m = 0; m < 16; ++m) {
    std::string label(4, '+');
    for (int j = 0; j < 4; ++j) {
      if ((m >> j) & 1) label[static_cast<std::size_t>(j)] = '-';
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

ParityOutcome simulate_noisy(const ScheduledCircuit& sc, const DeviceConfig& device,
                             const NoiseModel& noise, long shots, const std::string& input,
                             std::uint64_t seed) {
  Matrix rho = simulate_density_matrix(sc, device, noise, input);

  std::array<int, 4> data_qubits{};
  for (int j = 0; j < 4; ++j) {
    data_qubits[static_cast<std::size_t>(j)] = device.role("D" + std::to_string(j + 1));
  }
  const int syndrome_qubit = device.role("S");

  // Ideal basis change so the data qubits read out in the X basis.
  for (int q : data_qubits) {
    rho = apply_qubit_channel(rho, {one_qubit_unitary(h_gate(q))}, q, sc.n_qubits);
  }

  const long dim = 1L << sc.n_qubits;
  std::map<std::pair<int, std::string>, double> probs;
  for (long k = 0; k < dim; ++k) {
    const double p = std::max(rho(k, k).real(), 0.0);
    if (p == 0.0) continue;
    const int sbit = static_cast<int>((k >> syndrome_qubit) & 1);
    std::string data(4, '+');
    for (int j = 0; j < 4; ++j) {
      if ((k >> data_qubits[static_cast<std::size_t>(j)]) & 1) {
        data[static_cast<std::size_t>(j)] = '-';
      }
    }
    probs[{sbit, data}] += p;
  }

  if (noise.readout_flip > 0.0) {
    const double f = noise.readout_flip;
    for (int bit = 0; bit < 5; ++bit) {  // syndrome plus four data bits
      std::map<std::pair<int, std::string>, double> flipped;
      for (const auto& [key, w] : probs) {
        auto other = key;
        if (bit == 0) {
          other.first = 1 - other.first;
        } else {
          auto& ch = other.second[static_cast<std::size_t>(bit - 1)];
          ch = (ch == '+') ? '-' : '+';
        }
        flipped[key] += (1.0 - f) * w;
        flipped[other] += f * w;
      }
      probs = std::move(flipped);
    }
  }

  const double total = weight_total(probs);
  if (total <= 0.0) throw NumericalError("readout distribution has no weight");

  ParityOutcome out;
  out.input = input;
  if (shots <= 0) {
    out.shots = 0;
    for (const auto& [key, w] : probs) out.weights[key] = w / total;
    return out;
  }

  out.shots = shots;
  std::vector<std::pair<std::pair<int, std::string>, double>> cumulative;
  cumulative.reserve(probs.size());
  double acc = 0.0;
  for (const auto& [key, w] : probs) {
    acc += w / total;
    cumulative.push_back({key, acc});
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (long s = 0; s < shots; ++s) {
    const double u = uniform(rng);
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u,
                               [](const auto& entry, double value) { return entry.second < value; });
    if (it == cumulative.end()) --it;
    out.weights[it->first] += 1.0;
  }
  return out;
}

ParityErrorReport error_statistics(const std::vector<ParityOutcome>& outcomes) {
  const std::vector<std::string> labels = parity_input_labels();
  if (outcomes.size() != labels.size()) {
    throw ValidationError("error statistics need exactly one outcome per input state");
  }
  std::set<std::string> expected(labels.begin(), labels.end());
  std::set<std::string> seen;
  for (const ParityOutcome& o : outcomes) {
    if (!expected.count(o.input)) throw ValidationError("unknown input label '" + o.input + "'");
    if (!seen.insert(o.input).second) {
      throw ValidationError("duplicate outcome for input '" + o.input + "'");
    }
  }

  auto mean_and_sem = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    return std::pair<double, double>{mean, std::sqrt(var / static_cast<double>(xs.size()))};
  };

  std::vector<double> syndrome_errors, data_errors;
  std::array<std::vector<double>, 4> qubit_errors;
  for (const ParityOutcome& o : outcomes) {
    syndrome_errors.push_back(o.syndrome_error());
    data_errors.push_back(o.data_error());
    for (int k = 0; k < 4; ++k) {
      qubit_errors[static_cast<std::size_t>(k)].push_back(o.data_qubit_error(k));
    }
  }

  ParityErrorReport report;
  std::tie(report.syndrome_error, report.syndrome_error_std) = mean_and_sem(syndrome_errors);
  std::tie(report.data_error, report.data_error_std) = mean_and_sem(data_errors);
  for (int k = 0; k < 4; ++k) {
    const auto& xs = qubit_errors[static_cast<std::size_t>(k)];
    double mean = 0.0;
    for (double x : xs) mean += x;
    report.data_qubit_error[static_cast<std::size_t>(k)] = mean / static_cast<double>(xs.size());
  }
  return report;
}

}  // namespace scrplab
