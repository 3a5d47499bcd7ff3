// SPDX-License-Identifier: Apache-2.0
//
// Pulse envelopes, schedule instructions, and the echoed CR / parity-gate schedule
// builders.
//
// Rotation conventions: IdealRotation(qubit, axis, angle) applies exp(-i angle/2 * sigma_axis)
// on the dressed qubit subspace. The parity-gate dressing therefore inserts Z(-pi/2) on the
// controls (a phase-advance by pi/2) and X(pi) on the target, which together with the
// calibrated conditional rotations reproduce the Z-parity gate up to global phase.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scrplab/common.hpp"
#include "scrplab/device.hpp"

namespace scrplab {

/// Flat-top envelope with Gaussian rise/fall edges of length 4*sigma each.
struct FlatTopGaussian {
  Complex amplitude{0.0, 0.0};  ///< rad/s
  double duration = 0.0;        ///< s (total, edges included)
  double rise_sigma = 0.0;      ///< s
  double flat_width = 0.0;      ///< s; flat_width + 8*rise_sigma must not exceed duration
};

/// Constant envelope (always-on CW tone).
struct ConstantEnvelope {
  Complex amplitude{0.0, 0.0};  ///< rad/s
  double duration = 0.0;        ///< s
};

struct PulseEnvelope {
  std::variant<FlatTopGaussian, ConstantEnvelope> shape;

  double duration() const;
  /// Envelope value at local time tau in [0, duration]; zero outside.
  Complex value(double tau) const;
  /// Integral of the envelope over its support (complex area, rad).
  Complex area() const;
  void validate() const;
};

/// A microwave tone driving `control` in the common target-resonant frame.
struct CRTone {
  int control = 0;
  double carrier = 0.0;  ///< rad/s
  PulseEnvelope envelope;
};

/// A resonant tone applied directly on the target during CR pulses.
struct RotaryTone {
  int target = 0;
  PulseEnvelope envelope;
};

/// Instantaneous ideal single-qubit rotation exp(-i angle/2 sigma_axis), zero duration.
struct IdealRotation {
  int qubit = 0;
  char axis = 'X';  ///< 'X', 'Y', or 'Z'
  double angle = 0.0;
};

struct Delay {
  int qubit = 0;
  double duration = 0.0;
};

struct Instruction {
  std::variant<CRTone, RotaryTone, IdealRotation, Delay> op;
  double start = 0.0;  ///< s

  double duration() const;
};

/// Time-sorted instruction list; total_duration = max(start + duration).
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<Instruction> instructions);

  const std::vector<Instruction>& instructions() const { return instructions_; }
  double total_duration() const { return total_duration_; }
  /// Shared carrier of all tones (rad/s); 0 when the schedule has no tones.
  double frame_carrier() const;

  /// Append another schedule after this one, shifting its starts.
  Schedule then(const Schedule& next) const;

  std::string to_json_text() const;

 private:
  void validate() const;
  std::vector<Instruction> instructions_;
  double total_duration_ = 0.0;
};

/// Echoed CR: two opposite-sign CR half-pulses separated by X_pi on the control,
/// rotary tone co-aligned with each half (sign flipped with the CR sign), and a
/// trailing X_pi so the zero-drive schedule acts as the identity.
Schedule build_ecr_schedule(const DeviceConfig& device, int control, int target, Complex cr_amp,
                            Complex rotary_amp, double half_duration, double rise_sigma);

/// Simultaneous echoed CR from both controls onto the shared target with center-aligned
/// X_pi echoes, one shared rotary tone, and a trailing echo pair. If `dressing`, prepends
/// the local rotations that map the calibrated conditional rotations to the Z-parity gate.
Schedule build_scrp_schedule(const DeviceConfig& device, int c1, int c2, int t, Complex cr_amp1,
                             Complex cr_amp2, Complex rotary_amp, double half_duration,
                             double rise_sigma, bool dressing = false);

}  // namespace scrplab
