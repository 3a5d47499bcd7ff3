// SPDX-License-Identifier: Apache-2.0
//
// Weight-4 X-parity measurement on a heavy-hexagon seven-qubit patch: circuit
// builders for the CNOT form and the Z-parity form, as-late-as-possible (ALAP)
// scheduling against a per-gate duration table, dynamical-decoupling insertion
// into idle windows, noisy density-matrix simulation with per-interval
// amplitude/phase damping, and syndrome/data error statistics averaged over
// the sixteen +/- product inputs.
//
// Qubit layout used by the builders, indices 0..6:
//   (D1, F1, D2, S, D3, F2, D4)
// where D1..D4 are data qubits, S is the syndrome qubit, and F1/F2 are flag
// qubits mediating between S and the data. The couplings form the tree
// D1-F1-D2, F1-S-F2, D3-F2-D4, matching `paper_device()`.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "scrplab/clifford_rb.hpp"
#include "scrplab/common.hpp"
#include "scrplab/device.hpp"

namespace scrplab {

/// A gate with its time window on the schedule. `stop - start` is the duration
/// the scheduler assigned from the duration table.
struct ScheduledGate {
  Gate gate;
  double start = 0.0;  ///< s
  double stop = 0.0;   ///< s
};

/// A maximal window during which a qubit carries state but no gate acts on it.
struct IdleInterval {
  double start = 0.0;  ///< s
  double stop = 0.0;   ///< s
};

/// A circuit with start times. Gates never overlap on a qubit, and for every
/// qubit the idle intervals partition the complement of its gate windows
/// within [0, total_duration] (leading and trailing gaps included).
struct ScheduledCircuit {
  int n_qubits = 0;
  std::vector<ScheduledGate> gates;             ///< sorted by start time
  std::vector<std::vector<IdleInterval>> idles; ///< per qubit, time-sorted
  double total_duration = 0.0;                  ///< s
};

/// The X-parity check in CNOT form: 8 CNOTs arranged as four common-control
/// pairs (syndrome onto both flags, each flag onto its two data qubits, then
/// syndrome onto both flags again), with a Hadamard on the syndrome qubit at
/// both ends. Acting on data states prepared in the X basis, the syndrome
/// qubit ends holding the X-parity of the four data qubits in the Z basis.
Circuit build_xparity_cnot();

/// The same measurement written with three-qubit Z-parity gates: the
/// common-control CNOT pairs become common-target ZPARITY gates conjugated by
/// Hadamards, and every interior Hadamard pair cancels. The remaining dressing
/// is a flag H layer at both ends and a data H layer around the outer parity
/// gates; the syndrome wire carries no Hadamard at all. The circuit's unitary
/// equals build_xparity_cnot()'s exactly.
Circuit build_xparity_parity();

/// Duration table reconstructed for the seven-qubit patch, in seconds. Keys
/// are either instance-qualified ("CX@1,3": name plus the sorted qubit
/// indices) or plain gate names acting as fallbacks. Single-qubit gates take
/// 35.6 ns (virtual RZ is free), the flag-syndrome CNOTs 352 ns, the
/// data-flag CNOTs 566.9 ns, the central ZPARITY 369.8 ns, the outer ones
/// 554.2 ns, and measurement 860 ns. With this table the ALAP makespans of
/// the two parity circuits are 2261 ns (CNOT form) and 1365 ns (parity form).
std::map<std::string, double> default_parity_durations();

/// Lookup key naming one gate instance: the gate name plus "@" and its qubit
/// indices in ascending order ("ZPARITY@1,3,5"). Gates without qubits key by
/// name alone. Duration tables and unitary overrides try this key first and
/// fall back to the plain name.
std::string gate_instance_key(const Gate& g);

/// Duration of one gate under a table: DELAY gates use their own `duration`
/// field, BARRIER defaults to zero, and every other gate must resolve through
/// gate_instance_key or its plain name (ValidationError otherwise).
double gate_duration(const Gate& g, const std::map<std::string, double>& durations);

/// Schedule a circuit as late as possible: processing gates in reverse list
/// order, each gate ends at the earliest time its qubits are next busy, and
/// the whole schedule is shifted so the earliest start is 0 and all final
/// gates share the common end time total_duration. List order is the
/// dependency order; gates on disjoint qubits may overlap.
ScheduledCircuit schedule_alap(const Circuit& c, const std::map<std::string, double>& durations);

/// Replace every idle interval long enough to host two X pulses with the
/// decoupling sequence Delay(tau), X(+pi), Delay(2*tau), X(-pi), Delay(tau),
/// where tau = (idle - 2*x_duration)/4, so the inserted gates fill the window
/// exactly. Shorter idles are left untouched. Start times of existing gates
/// never move. The two pulses compose to the identity, so with ideal pulses
/// the sequence is transparent to any static Z rotation accumulated across
/// the window.
ScheduledCircuit insert_dd(const ScheduledCircuit& sc, double x_duration);

/// Noise configuration for the scheduled-circuit simulator. Damping applies
/// amplitude/phase damping per qubit over every gate duration and idle
/// interval, using the device T1/T2. `idle_z_rate` adds a coherent Z rotation
/// (rad/s) accumulated over idle intervals and DELAY gates only, modeling a
/// static frame drift on parked qubits. `readout_flip` flips each measured
/// bit independently with the given probability. `unitary_overrides` replaces
/// the built-in unitary of matching gates (keyed by gate_instance_key or
/// plain name) with a caller-supplied matrix on the gate's qubits, e.g. a
/// pulse-derived ZPARITY propagator; the matrix is indexed little-endian in
/// the gate's qubit-list order.
struct NoiseModel {
  bool damping = true;
  double idle_z_rate = 0.0;
  double readout_flip = 0.0;
  std::map<std::string, Matrix> unitary_overrides;
};

/// Evolve the scheduled circuit as a density matrix on 2^n dimensions: each
/// gate applies its (possibly overridden) ideal unitary at the end of its
/// window, damping acts on every qubit across every time slice, and idle
/// drift phases apply where idle windows close. Returns the final density
/// matrix before any readout basis change. The trace is checked to stay
/// within 1e-9 of one (NumericalError otherwise). The input label prepares
/// the four data qubits in |+> or |-> ideally at t = 0; all other qubits
/// start in |0>.
Matrix simulate_density_matrix(const ScheduledCircuit& sc, const DeviceConfig& device,
                               const NoiseModel& noise, const std::string& input);

/// Readout record for one input state: the joint distribution over the
/// syndrome bit and the four data bits read in the X basis ('+' for the +1
/// eigenstate), with the flag qubits traced out. In exact mode (shots == 0)
/// the weights are probabilities summing to one; in sampled mode they are
/// counts summing to `shots`.
struct ParityOutcome {
  std::string input;  ///< one of the 16 +/- labels, character k is data qubit Dk+1
  long shots = 0;     ///< 0 => exact probabilities
  std::map<std::pair<int, std::string>, double> weights;

  /// 0 when the input holds an even number of '+', else 1.
  int correct_syndrome() const;
  /// Normalized probability of one joint outcome.
  double probability(int syndrome, const std::string& data) const;
  /// Probability that the syndrome bit differs from correct_syndrome().
  double syndrome_error() const;
  /// Probability that the measured data string differs from the input.
  double data_error() const;
  /// Probability that data bit k (0-based, qubit Dk+1) differs from the input.
  double data_qubit_error(int k) const;
};

/// The sixteen +/- input labels in a fixed order ("++++", "-+++", ...,
/// "----"); character k addresses data qubit Dk+1.
std::vector<std::string> parity_input_labels();

/// Run one scheduled parity check on one input: simulate the density matrix,
/// rotate the data qubits into the X basis ideally, read out, and aggregate
/// the joint (syndrome, data) distribution with flags traced out. With
/// shots > 0 the distribution is sampled multinomially with the given seed.
/// The device must carry roles D1..D4 and S and match the circuit width.
ParityOutcome simulate_noisy(const ScheduledCircuit& sc, const DeviceConfig& device,
                             const NoiseModel& noise, long shots, const std::string& input,
                             std::uint64_t seed = 0x5eedULL);

/// Error statistics over all sixteen inputs: mean syndrome error, mean data
/// error, and per-data-qubit error columns, each averaged over the inputs.
/// The quoted standard errors are the spread across the sixteen per-input
/// values divided by 4 (standard error of the mean over inputs).
struct ParityErrorReport {
  double syndrome_error = 0.0;
  double syndrome_error_std = 0.0;
  double data_error = 0.0;
  double data_error_std = 0.0;
  std::array<double, 4> data_qubit_error{};
};

/// Aggregate outcomes into the report. Every one of the sixteen inputs must
/// appear exactly once (ValidationError otherwise).
ParityErrorReport error_statistics(const std::vector<ParityOutcome>& outcomes);

}  // namespace scrplab
