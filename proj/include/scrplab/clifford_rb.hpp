// SPDX-License-Identifier: Apache-2.0
//
// Three-qubit Clifford machinery and the interleaved randomized-benchmarking
// (IRB) pipeline: stabilizer tableaus with sign tracking, exactly uniform
// Clifford sampling, synthesis into {RZ, SX, CX}, routing onto a coupling
// line, sequence construction with exact inversion, and the exponential decay
// fit that turns survival curves into error-per-gate numbers.
//
// Qubit convention matches the rest of the library: qubit 0 is the
// least-significant bit of basis-state indices, and the left-most character of
// a Pauli label acts on qubit 0.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scrplab/common.hpp"
#include "scrplab/device.hpp"

namespace scrplab {

/// One circuit instruction. `name` is one of "RZ" (angle in `param`), "SX",
/// "X", "H", "CX" (control first), "ZPARITY" (qubits ordered control-1,
/// target, control-2), "DELAY" (length in `duration`), or "BARRIER" (a
/// sequencing marker carrying no qubits; noise models may hook it).
struct Gate {
  std::string name;
  std::vector<int> qubits;
  double param = 0.0;     ///< rad; only RZ uses it.
  double duration = 0.0;  ///< s; only DELAY uses it.
};

/// An ordered list of gates on `n_qubits` qubits.
struct Circuit {
  int n_qubits = 3;
  std::vector<Gate> gates;
};

/// Stabilizer tableau of an n-qubit Clifford: rows 0..n-1 hold the images of
/// X_q and rows n..2n-1 the images of Z_q, each as (x bit-mask, z bit-mask,
/// sign bit). The 2n x 2n bit matrix is symplectic over GF(2) by construction,
/// and every mutation preserves that.
class CliffordTableau {
 public:
  explicit CliffordTableau(int n_qubits = 3);

  int n() const { return n_; }
  bool x_bit(int row, int qubit) const;
  bool z_bit(int row, int qubit) const;
  bool phase_bit(int row) const;

  bool is_identity() const;
  bool is_symplectic() const;
  bool operator==(const CliffordTableau& other) const;
  bool operator!=(const CliffordTableau& other) const { return !(*this == other); }

  /// Conjugates the tableau by one gate (this Clifford followed by `g`).
  /// RZ angles must be multiples of pi/2 to within 1e-12; DELAY and BARRIER
  /// are no-ops. Throws ValidationError for other names or bad qubits.
  void apply_gate(const Gate& g);

  /// Tableau of `first-then-second`: returns the Clifford that applies *this
  /// and then `second`.
  CliffordTableau then(const CliffordTableau& second) const;

  /// Group inverse (matrix part by the symplectic inverse, signs by solving
  /// the composition back to the identity).
  CliffordTableau inverse() const;

  /// Image of a Hermitian Pauli under conjugation: label -> (label, sign).
  std::pair<std::string, int> image(const std::string& pauli) const;

  static CliffordTableau from_circuit(const Circuit& c);

 private:
  struct Row {
    std::uint32_t x = 0;
    std::uint32_t z = 0;
    bool r = false;
  };

  void conj_h(int q);
  void conj_s(int q);
  void conj_sdg(int q);
  void conj_z(int q);
  void conj_x(int q);
  void conj_sx(int q);
  void conj_sxdg(int q);
  void conj_cx(int c, int t);
  void check_qubit(int q) const;

  friend CliffordTableau sample_uniform_clifford(std::uint64_t, int);
  friend Circuit decompose_clifford(const CliffordTableau&);

  int n_;
  std::vector<Row> rows_;
};

/// Draws one Clifford exactly uniformly at random (deterministic in `seed`):
/// a symplectic basis is built pair by pair with rejection sampling, which
/// walks the group-order product exactly, then 2n sign bits are drawn.
CliffordTableau sample_uniform_clifford(std::uint64_t seed, int n_qubits = 3);

/// Synthesizes a circuit over {RZ(k*pi/2), SX, CX} with all-to-all
/// connectivity whose tableau equals `t`. The sweep processes one qubit at a
/// time (pivot, clear X row, clear Z row, fix signs), which for three qubits
/// never emits more than 15 CX gates.
Circuit decompose_clifford(const CliffordTableau& t);

/// Rewrites `c` for a coupling line (i - j - k): each CX between the outer
/// qubits i and k becomes the four-gate echo CX(j,k) CX(i,j) CX(j,k) CX(i,j)
/// (and the mirrored sequence for CX(k,i)); everything else passes through.
/// Throws ValidationError if a gate touches a qubit outside the line.
Circuit route_to_line(const Circuit& c, const std::array<int, 3>& line);

/// Unitary matrix of one gate embedded on n qubits.
Matrix gate_unitary(const Gate& g, int n_qubits);

/// Unitary of a whole circuit (gates applied in list order).
Matrix circuit_unitary(const Circuit& c);

/// One benchmarking sequence: `length` random Cliffords (sample index
/// `sample`), optionally interleaved, closed by the exact inverse Clifford.
struct RbCircuit {
  int length = 0;
  int sample = 0;
  Circuit circuit;
};

/// Builds randomized-benchmarking sequences on three qubits. For every
/// (length, sample) pair the random Cliffords are drawn from a seed derived
/// only from (seed, length, sample), so reference and interleaved streams
/// built with the same seed share their random Cliffords. Each Clifford is
/// synthesized, routed onto `line`, and followed by a BARRIER; when
/// `interleave` is given (and non-empty) its gates plus a BARRIER follow every
/// random Clifford. The closing inversion (also routed, also ending in a
/// BARRIER, with measurement implied after the final BARRIER) returns the
/// composite to the identity tableau. An empty interleave circuit is the
/// identity: nothing is inserted, so both streams coincide exactly.
std::vector<RbCircuit> build_irb_circuits(const std::vector<int>& lengths, int samples_per_length,
                                          const std::optional<Circuit>& interleave,
                                          const std::array<int, 3>& line, std::uint64_t seed);

/// Maps a gate to its action on a density matrix (dimension 2^n).
using GateExecutor = std::function<void(Matrix& rho, const Gate& g)>;

/// Result of one randomized-benchmarking run: per-length survival statistics
/// plus the bounded fit survival = amplitude * decay^length + baseline with
/// amplitude, baseline in [0, 1] and decay in [0, 1]. `error_per_clifford` is
/// (d-1)/d * (1 - decay) with d = 2^n, i.e. the decay read against an ideal
/// reference; interleaved comparisons use interleaved_epg instead.
struct RBResult {
  int n_qubits = 0;
  std::vector<int> lengths;                      ///< distinct, ascending
  std::vector<double> mean_survival;             ///< per length
  std::vector<double> std_survival;              ///< per length, sample std
  std::vector<std::vector<double>> survivals;    ///< raw per-circuit values
  double amplitude = 0.0;
  double decay = 1.0;
  double baseline = 0.0;
  double decay_stderr = 0.0;
  double error_per_clifford = 0.0;
  double error_per_clifford_stderr = 0.0;
};

/// Runs every circuit from the |0...0> state, reads the survival probability
/// (population of |0...0>), and fits the decay. `shots` > 0 replaces each
/// exact probability with a binomial estimate from that many shots
/// (deterministic in `seed`); `shots` == 0 keeps exact probabilities. Needs
/// at least two distinct lengths for the fit.
RBResult run_rb(const std::vector<RbCircuit>& circuits, const GateExecutor& executor,
                int shots = 0, std::uint64_t seed = 0x5eed);

/// Interleaved error per gate from a reference and an interleaved decay:
/// value = (d-1)/d * (1 - decay_int / decay_ref), with the uncertainty
/// propagated from both fit errors.
struct EpgEstimate {
  double value = 0.0;
  double uncertainty = 0.0;
};
EpgEstimate interleaved_epg(const RBResult& reference, const RBResult& interleaved);

/// Gate durations used by the relaxation-noise executor: virtual RZ and
/// BARRIER take no time, one-qubit pulses 35.6 ns, CX 352 ns, and the native
/// three-qubit parity gate 369.8 ns (DELAY carries its own duration).
std::map<std::string, double> default_gate_durations();

/// Noiseless executor: every gate acts as its unitary; DELAY and BARRIER do
/// nothing.
GateExecutor ideal_executor();

/// Ideal gates plus a global depolarizing kick at every BARRIER:
/// rho -> (1-p) rho + p I/d. This models one error event per Clifford.
GateExecutor depolarizing_executor(double p);

/// Ideal gates followed by amplitude-phase damping on every qubit for the
/// gate's duration, using the device's T1/T2 times.
GateExecutor damping_executor(const DeviceConfig& device,
                              std::map<std::string, double> durations = default_gate_durations());

/// The parity gate compiled as two CX onto the shared target: CX(0,1) CX(2,1).
Circuit zparity_as_two_cx();

/// The parity gate as the native three-qubit instruction ZPARITY(0,1,2).
Circuit zparity_native();

}  // namespace scrplab
