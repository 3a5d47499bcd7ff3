// SPDX-License-Identifier: Apache-2.0
//
// Error-amplifying tomography for echoed conditional-X gates: amplification
// sequences, per-control-block coefficient estimation, Walsh reconstruction of
// Pauli coefficients, the rotary cost function, the 50-point rotary-amplitude
// sweep, and the conditional-angle amplitude solver.
//
// For a gate that is block-diagonal over the control qubits, each control
// state |b> acts on the target as an SU(2) rotation
//   U_b = exp(-i theta_b/2 n_b.sigma),
// and the block coefficients are A_P^{|b>} = -i n_{b,P} sin(theta_b/2)
// = tr(P U_b)/2.  Repeating the gate N times with a target refocusing pulse
// amplifies the Y and Z components linearly in N; the estimators below invert
// that amplification.  Per-control-state coefficients relate to Pauli-label
// coefficients (A_{QPR}: Q on the first control, P on the target, R on the
// second control) through a +-1 Walsh system.

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "scrplab/device.hpp"
#include "scrplab/pulse.hpp"

namespace scrplab {

enum class GateKind { CR, SCRP };

/// Parameters of one amplification run.
struct HeatSpec {
  int repetitions = 6;       ///< N: even, positive.
  char refocus_pauli = 'Y';  ///< target refocusing axis, 'Y' or 'Z'.
  std::string control_bits;  ///< "0"/"1" (CR) or "00".."11" (SCRP), char k = k-th control.
  char measure_basis = 'Z';  ///< target readout basis, 'Y' or 'Z'.

  void validate(GateKind kind) const;
};

/// SU(2) rotation of one control block: exp(-i angle/2 axis.sigma).
struct BlockRotation {
  std::array<double, 3> axis{1.0, 0.0, 0.0};  ///< unit vector within 1e-8.
  double angle = 0.0;                          ///< rad.

  void validate() const;
  Matrix unitary() const;
  /// A_P = -i axis_P sin(angle/2) for P in {X, Y, Z}.
  Complex coefficient(char pauli) const;
};

/// Measurement table: (control bits, refocus pauli, measure basis) -> <P_target>.
using HeatKey = std::tuple<std::string, char, char>;
using HeatMeasurements = std::map<HeatKey, double>;

/// The (b, refocus, basis) combinations the estimator consumes for a kind.
std::vector<HeatKey> heat_measurement_keys(GateKind kind);

/// Full executable amplification schedules: control/target preparation, N
/// repetitions of (gate; target refocusing pulse), measurement pre-rotation.
/// Controls and target are inferred from the gate schedule's tones.
Schedule build_heat_sequence_cr(const HeatSpec& spec, const Schedule& gate);
Schedule build_heat_sequence_scrp(const HeatSpec& spec, const Schedule& gate);

/// Expectation of the target measurement after one amplification sequence,
/// simulated at the qubit level from the gate's qubit-subspace unitary
/// (dimension 2^n; `controls` and `target` are bit positions).  The sampled
/// variant draws `shots` binomial samples instead of returning the exact value.
double heat_expectation(const Matrix& gate, const std::vector<int>& controls, int target,
                        const HeatSpec& spec);
double heat_expectation_sampled(const Matrix& gate, const std::vector<int>& controls,
                                int target, const HeatSpec& spec, int shots,
                                std::mt19937_64& rng);

/// All estimator-required expectations for one gate unitary (exact when
/// shots == 0, sampled otherwise).
HeatMeasurements heat_measurements(const Matrix& gate, const std::vector<int>& controls,
                                   int target, int repetitions, GateKind kind, int shots = 0,
                                   std::mt19937_64* rng = nullptr);

/// Ideal-amplification measurement model: the expectation table whose
/// estimator inversion reproduces the block coefficients of the given
/// rotations exactly (the sequences realize it to leading order in the error
/// angles).  The sampled variant adds binomial shot noise; it requires every
/// ideal expectation to lie in [-1, 1].
HeatMeasurements ideal_heat_measurements(const std::map<std::string, BlockRotation>& blocks,
                                         int repetitions, GateKind kind);
HeatMeasurements sampled_heat_measurements(const std::map<std::string, BlockRotation>& blocks,
                                           int repetitions, GateKind kind, int shots,
                                           std::mt19937_64& rng);

/// Inverts the amplification: per-block (A_Y, A_Z) from the measurement table.
std::map<std::string, std::pair<Complex, Complex>> estimate_block_coefficients(
    const HeatMeasurements& measurements, int repetitions, GateKind kind);

/// Inverts the +-1 Walsh system for one target Pauli; block keys are
/// {"0","1"} (CR) or {"00","10","01","11"} (SCRP), output labels "QP"/"QPR".
std::map<std::string, Complex> walsh_reconstruct(
    const std::map<std::string, Complex>& per_block, char pauli);

/// Sum of |A| over the error labels: targets P in {Y, Z} with every control
/// position in {I, Z}.  Labels outside that set are ignored; missing count 0.
double rotary_cost(const std::map<std::string, Complex>& coeffs);

/// Block-diagonal gate unitary from per-block rotations (4x4 for CR with
/// control = bit 0, target = bit 1; 8x8 for SCRP with controls = bits 0, 2,
/// target = bit 1).
Matrix block_unitary(const std::map<std::string, BlockRotation>& blocks, GateKind kind);

/// Direct per-block coefficients of a gate unitary: each control block is
/// re-unitarized, phase-fixed to the SU(2) branch nearest the ideal
/// conditional rotation of `kind`, and read out as A_P = tr(P W_b)/2.
std::map<std::string, std::pair<Complex, Complex>> block_coefficients_from_unitary(
    const Matrix& gate, const std::vector<int>& controls, int target, GateKind kind);

struct CalibrationOptions {
  bool fast = true;      ///< direct extraction instead of simulated sequences.
  int repetitions = 6;   ///< N for the full-sequence mode.
  int shots = 0;         ///< 0 = exact expectations (full-sequence mode).
  double dt = 1e-11;     ///< integrator step.
  unsigned seed = 0x5eed;
};

struct CalibrationResult {
  double best_amplitude = 0.0;
  std::vector<std::pair<double, double>> cost_curve;  ///< 50 x (amplitude, cost).
};

/// Sweeps the rotary amplitude over 50 equally spaced values in [0, sweep_max]
/// (first point 0), evaluates rotary_cost at each, and returns the argmin with
/// ties broken toward the smaller amplitude.  `builder` maps an amplitude to
/// the full gate schedule.
CalibrationResult calibrate_rotary_amplitude(const DeviceConfig& device,
                                             const std::function<Schedule(double)>& builder,
                                             double sweep_max,
                                             const CalibrationOptions& options = {});

struct ScrpSolveOptions {
  double dt = 1e-11;
  int rounds = 3;              ///< alternating per-drive secant rounds.
  double tolerance = 1e-8;     ///< on |psi - pi/2| per conditional angle.
  double rotary_amplitude = 0.0;
  std::optional<std::pair<double, double>> initial;  ///< warm start (omega1, omega2).
};

struct ScrpAmplitudeSolve {
  double omega1 = 0.0;  ///< signed CR amplitude on the first control, rad/s.
  double omega2 = 0.0;  ///< signed CR amplitude on the second control, rad/s.
  double psi1 = 0.0;    ///< achieved conditional half-angle for control 1.
  double psi2 = 0.0;    ///< achieved conditional half-angle for control 2.
  double residual = 0.0;
  int evaluations = 0;
};

/// Solves for the signed CR amplitudes that drive both conditional half-angles
/// (psi_1, psi_2) = ((phi_00 - phi_10)/2, (phi_00 - phi_01)/2) to pi/2, where
/// phi_b is the conditional X rotation angle of control block b of the
/// propagated, dressed-subspace gate.  Cold starts invert the perturbative
/// conditional rate against the pulse area; `initial` reuses a known solution.
ScrpAmplitudeSolve solve_scrp_amplitudes(const DeviceConfig& device, double half_duration,
                                         double rise_sigma,
                                         const ScrpSolveOptions& options = {});

/// Shipped solver output for paper_triplet() at half_duration = 184.9 ns,
/// rise_sigma = 4 ns, zero rotary amplitude.
ScrpAmplitudeSolve default_scrp_calibration();

}  // namespace scrplab
