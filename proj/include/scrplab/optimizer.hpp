// SPDX-License-Identifier: Apache-2.0
//
// Circuit rewriting around the shared-target ZPARITY gate: fusing CX pairs
// with a common target (directly) or a common control (up to Hadamard
// dressing) into single ZPARITY gates, and compiling SWAP chains into the
// ZPARITY-based ladder that needs N−1 ZPARITY and N+2 CX gates instead of
// the standard 3N CX. Every replacement is verified on its touched qubits
// as it is made, and whole-circuit equivalence checks are available up to
// a dense-matrix feasibility cap.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "scrplab/clifford_rb.hpp"
#include "scrplab/common.hpp"

namespace scrplab {

/// Result of comparing two circuits as unitaries, up to a global phase.
struct EquivalenceResult {
  bool equivalent = false;
  /// | 2^n − |Tr(Ua† Ub)| |; zero exactly when equivalent up to phase.
  double trace_defect = 0.0;
  /// Basis state with the largest output discrepancy after aligning the
  /// global phase; −1 when equivalent.
  long counterexample_index = -1;
  /// The same basis state as a ket label in standard (highest qubit first)
  /// order; empty when equivalent.
  std::string counterexample_ket;
  /// Euclidean norm of the output-state difference at the counterexample.
  double discrepancy = 0.0;
};

/// Total duration and unit depth of one circuit under a duration table.
struct DepthReport {
  double total_duration = 0.0;  ///< ALAP total under the given durations (s)
  double unit_depth = 0.0;      ///< ALAP total with 1 per multi-qubit gate, 0 per single-qubit gate
};

/// Before/after accounting for one rewrite.
struct RewriteReport {
  Circuit input;
  Circuit output;
  std::map<std::string, int> counts_before;
  std::map<std::string, int> counts_after;
  double duration_before = 0.0;  ///< seconds, ALAP under the supplied durations
  double duration_after = 0.0;
  double unit_depth_before = 0.0;
  double unit_depth_after = 0.0;
  /// True when the whole-circuit equivalence check ran (≤ 12 qubits) and
  /// passed; false when it was skipped for size. Rewrites additionally verify
  /// every local replacement as they go, regardless of circuit width.
  bool verified = false;
};

/// Single greedy left-to-right pass replacing CX pairs by ZPARITY gates.
///
/// A CX pairs with the next CX that shares its target (directly) or its
/// control (conjugating all three wires by Hadamards). Gates between the two
/// may touch the first CX's other wire — the replacement leaves them in
/// place, after the fused gate, which they reach by commuting past the
/// second CX — but any gate on the shared wire or on the partner's other
/// wire blocks the fusion, as does a BARRIER. Each replacement is verified
/// on its three wires before it is committed. The pass is idempotent.
Circuit fuse_two_cx(const Circuit& c);

/// Rewrites SWAP gates: maximal runs of consecutive SWAPs forming a simple
/// path q0−q1−…−qN (N ≥ 2) become the ZPARITY ladder with exactly N−1
/// ZPARITY and N+2 CX gates; isolated SWAPs expand to the standard three-CX
/// identity. Non-SWAP gates pass through and break chains. Every replacement
/// is verified on the wires it touches.
Circuit rewrite_swap_chain(const Circuit& c);

/// Compares two circuits as unitaries up to global phase via
/// |Tr(Ua† Ub)| = 2^n within 1e-9. Throws ValidationError when the circuits
/// disagree on qubit count or exceed 12 qubits (dense-matrix cap).
EquivalenceResult verify_equivalence(const Circuit& a, const Circuit& b);

/// ALAP total duration plus unit depth (1 per multi-qubit gate, 0 per
/// single-qubit gate and DELAY). Throws ValidationError when the duration
/// table misses a gate.
DepthReport depth_report(const Circuit& c, const std::map<std::string, double>& durations);

/// Exact per-name gate counts.
std::map<std::string, int> gate_counts(const Circuit& c);

/// Assembles the full before/after report; runs the whole-circuit
/// equivalence check when the circuits fit the 12-qubit cap.
RewriteReport make_rewrite_report(const Circuit& input, const Circuit& output,
                                  const std::map<std::string, double>& durations);

/// Circuit JSON: {"n_qubits": 3, "gates": [{"name": "CX", "qubits": [0, 1],
/// "param": 0.0, "duration": 0.0}, ...]}; param and duration are optional on
/// input and round-trip exactly.
Circuit circuit_from_json(const std::string& json_text);
std::string circuit_to_json(const Circuit& c);

}  // namespace scrplab
