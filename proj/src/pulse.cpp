// SPDX-License-Identifier: Apache-2.0
#include "scrplab/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>

#include "scrplab/hamiltonian.hpp"

namespace scrplab {

namespace {

constexpr double kEdgeSigmas = 4.0;  // each rise/fall edge spans 4 sigma

double flat_top_pulse_length(const FlatTopGaussian& p) {
  return p.flat_width + 2.0 * kEdgeSigmas * p.rise_sigma;
}

}  // namespace

double PulseEnvelope::duration() const {
  return std::visit([](const auto& p) { return p.duration; }, shape);
}

Complex PulseEnvelope::value(double tau) const {
  // Integrators sample the support endpoints; tolerate the rounding of t = t0 + k*h
  // so a boundary sample one ulp outside the window still reads the boundary value.
  const double slack = 1e-9 * duration();
  if (std::holds_alternative<ConstantEnvelope>(shape)) {
    const auto& p = std::get<ConstantEnvelope>(shape);
    return (tau >= -slack && tau <= p.duration + slack) ? p.amplitude : Complex(0.0, 0.0);
  }
  const auto& p = std::get<FlatTopGaussian>(shape);
  const double len = flat_top_pulse_length(p);
  if (tau < -slack || tau > std::min(len, p.duration) + slack) return {0.0, 0.0};
  tau = std::clamp(tau, 0.0, len);
  const double edge = kEdgeSigmas * p.rise_sigma;
  if (tau < edge) {
    const double u = (tau - edge) / p.rise_sigma;
    return p.amplitude * std::exp(-0.5 * u * u);
  }
  if (tau > len - edge) {
    const double u = (tau - (len - edge)) / p.rise_sigma;
    return p.amplitude * std::exp(-0.5 * u * u);
  }
  return p.amplitude;
}

Complex PulseEnvelope::area() const {
  if (std::holds_alternative<ConstantEnvelope>(shape)) {
    const auto& p = std::get<ConstantEnvelope>(shape);
    return p.amplitude * p.duration;
  }
  const auto& p = std::get<FlatTopGaussian>(shape);
  // Each truncated Gaussian edge integrates to sigma*sqrt(pi/2)*erf(4/sqrt(2)).
  const double edge_area =
      p.rise_sigma * std::sqrt(M_PI / 2.0) * std::erf(kEdgeSigmas / std::sqrt(2.0));
  return p.amplitude * (p.flat_width + 2.0 * edge_area);
}

void PulseEnvelope::validate() const {
  if (duration() <= 0.0) throw ValidationError("pulse duration must be positive");
  if (std::holds_alternative<FlatTopGaussian>(shape)) {
    const auto& p = std::get<FlatTopGaussian>(shape);
    if (p.rise_sigma <= 0.0) throw ValidationError("rise sigma must be positive");
    if (p.flat_width < 0.0) throw ValidationError("flat width must be non-negative");
    if (flat_top_pulse_length(p) > p.duration * (1.0 + 1e-12)) {
      throw ValidationError("flat width plus rise and fall edges exceeds pulse duration");
    }
  }
}

double Instruction::duration() const {
  return std::visit(
      [](const auto& inst) -> double {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, CRTone> || std::is_same_v<T, RotaryTone>) {
          return inst.envelope.duration();
        } else if constexpr (std::is_same_v<T, Delay>) {
          return inst.duration;
        } else {
          return 0.0;
        }
      },
      op);
}

Schedule::Schedule(std::vector<Instruction> instructions) : instructions_(std::move(instructions)) {
  std::stable_sort(instructions_.begin(), instructions_.end(),
                   [](const Instruction& a, const Instruction& b) { return a.start < b.start; });
  for (const auto& inst : instructions_) {
    total_duration_ = std::max(total_duration_, inst.start + inst.duration());
  }
  validate();
}

void Schedule::validate() const {
  // Tones sharing one physical drive line must not overlap in time.
  std::map<int, std::vector<std::pair<double, double>>> line_windows;
  for (const auto& inst : instructions_) {
    if (inst.start < 0.0) throw ValidationError("instruction start must be non-negative");
    int line = -1;
    if (const auto* cr = std::get_if<CRTone>(&inst.op)) {
      cr->envelope.validate();
      line = cr->control;
    } else if (const auto* rot = std::get_if<RotaryTone>(&inst.op)) {
      rot->envelope.validate();
      line = rot->target;
    } else if (const auto* d = std::get_if<Delay>(&inst.op)) {
      if (d->duration < 0.0) throw ValidationError("delay duration must be non-negative");
      continue;
    } else {
      continue;
    }
    line_windows[line].emplace_back(inst.start, inst.start + inst.duration());
  }
  for (auto& [line, windows] : line_windows) {
    std::sort(windows.begin(), windows.end());
    for (size_t i = 1; i < windows.size(); ++i) {
      if (windows[i].first < windows[i - 1].second - 1e-15) {
        throw ValidationError("overlapping tones on drive line " + std::to_string(line));
      }
    }
  }
  frame_carrier();  // throws on mixed carriers
}

double Schedule::frame_carrier() const {
  bool seen = false;
  double carrier = 0.0;
  for (const auto& inst : instructions_) {
    if (const auto* cr = std::get_if<CRTone>(&inst.op)) {
      if (seen && cr->carrier != carrier) {
        throw ValidationError("all tones in a schedule must share one frame carrier");
      }
      carrier = cr->carrier;
      seen = true;
    }
  }
  return carrier;
}

Schedule Schedule::then(const Schedule& next) const {
  std::vector<Instruction> merged = instructions_;
  for (Instruction inst : next.instructions()) {
    inst.start += total_duration_;
    merged.push_back(std::move(inst));
  }
  return Schedule(std::move(merged));
}

std::string Schedule::to_json_text() const {
  nlohmann::json out;
  out["total_duration_ns"] = total_duration_ * 1e9;
  out["frame_carrier_ghz"] = frame_carrier() / (kTwoPi * 1e9);
  out["instructions"] = nlohmann::json::array();
  auto envelope_json = [](const PulseEnvelope& env) {
    nlohmann::json j;
    if (const auto* p = std::get_if<FlatTopGaussian>(&env.shape)) {
      j["shape"] = "flat_top_gaussian";
      j["amplitude_mhz"] = {p->amplitude.real() / (kTwoPi * 1e6), p->amplitude.imag() / (kTwoPi * 1e6)};
      j["duration_ns"] = p->duration * 1e9;
      j["rise_sigma_ns"] = p->rise_sigma * 1e9;
      j["flat_width_ns"] = p->flat_width * 1e9;
    } else {
      const auto& c = std::get<ConstantEnvelope>(env.shape);
      j["shape"] = "constant";
      j["amplitude_mhz"] = {c.amplitude.real() / (kTwoPi * 1e6), c.amplitude.imag() / (kTwoPi * 1e6)};
      j["duration_ns"] = c.duration * 1e9;
    }
    return j;
  };
  for (const auto& inst : instructions_) {
    nlohmann::json j;
    j["start_ns"] = inst.start * 1e9;
    if (const auto* cr = std::get_if<CRTone>(&inst.op)) {
      j["kind"] = "cr_tone";
      j["control"] = cr->control;
      j["carrier_ghz"] = cr->carrier / (kTwoPi * 1e9);
      j["envelope"] = envelope_json(cr->envelope);
    } else if (const auto* rot = std::get_if<RotaryTone>(&inst.op)) {
      j["kind"] = "rotary_tone";
      j["target"] = rot->target;
      j["envelope"] = envelope_json(rot->envelope);
    } else if (const auto* ir = std::get_if<IdealRotation>(&inst.op)) {
      j["kind"] = "ideal_rotation";
      j["qubit"] = ir->qubit;
      j["axis"] = std::string(1, ir->axis);
      j["angle"] = ir->angle;
    } else {
      const auto& d = std::get<Delay>(inst.op);
      j["kind"] = "delay";
      j["qubit"] = d.qubit;
      j["duration_ns"] = d.duration * 1e9;
    }
    out["instructions"].push_back(std::move(j));
  }
  return out.dump(2);
}

namespace {

PulseEnvelope half_pulse(Complex amplitude, double half_duration, double rise_sigma) {
  FlatTopGaussian p;
  p.amplitude = amplitude;
  p.duration = half_duration;
  p.rise_sigma = rise_sigma;
  p.flat_width = half_duration - 2.0 * kEdgeSigmas * rise_sigma;
  if (p.flat_width < 0.0) {
    throw ValidationError("half duration too short for the requested rise sigma");
  }
  return PulseEnvelope{p};
}

}  // namespace

Schedule build_ecr_schedule(const DeviceConfig& device, int control, int target, Complex cr_amp,
                            Complex rotary_amp, double half_duration, double rise_sigma) {
  const double carrier = echo_frame_frequency(device, target, {control});
  const double half = half_duration;
  std::vector<Instruction> prog;
  prog.push_back({CRTone{control, carrier, half_pulse(cr_amp, half, rise_sigma)}, 0.0});
  prog.push_back({RotaryTone{target, half_pulse(rotary_amp, half, rise_sigma)}, 0.0});
  prog.push_back({IdealRotation{control, 'X', M_PI}, half});
  prog.push_back({CRTone{control, carrier, half_pulse(-cr_amp, half, rise_sigma)}, half});
  prog.push_back({RotaryTone{target, half_pulse(-rotary_amp, half, rise_sigma)}, half});
  prog.push_back({IdealRotation{control, 'X', M_PI}, 2.0 * half});
  return Schedule(std::move(prog));
}

Schedule build_scrp_schedule(const DeviceConfig& device, int c1, int c2, int t, Complex cr_amp1,
                             Complex cr_amp2, Complex rotary_amp, double half_duration,
                             double rise_sigma, bool dressing) {
  const double carrier = echo_frame_frequency(device, t, {c1, c2});
  const double half = half_duration;
  std::vector<Instruction> prog;
  if (dressing) {
    prog.push_back({IdealRotation{c1, 'Z', -M_PI_2}, 0.0});
    prog.push_back({IdealRotation{c2, 'Z', -M_PI_2}, 0.0});
    prog.push_back({IdealRotation{t, 'X', M_PI}, 0.0});
  }
  prog.push_back({CRTone{c1, carrier, half_pulse(cr_amp1, half, rise_sigma)}, 0.0});
  prog.push_back({CRTone{c2, carrier, half_pulse(cr_amp2, half, rise_sigma)}, 0.0});
  prog.push_back({RotaryTone{t, half_pulse(rotary_amp, half, rise_sigma)}, 0.0});
  prog.push_back({IdealRotation{c1, 'X', M_PI}, half});
  prog.push_back({IdealRotation{c2, 'X', M_PI}, half});
  prog.push_back({CRTone{c1, carrier, half_pulse(-cr_amp1, half, rise_sigma)}, half});
  prog.push_back({CRTone{c2, carrier, half_pulse(-cr_amp2, half, rise_sigma)}, half});
  prog.push_back({RotaryTone{t, half_pulse(-rotary_amp, half, rise_sigma)}, half});
  prog.push_back({IdealRotation{c1, 'X', M_PI}, 2.0 * half});
  prog.push_back({IdealRotation{c2, 'X', M_PI}, 2.0 * half});
  return Schedule(std::move(prog));
}

}  // namespace scrplab
