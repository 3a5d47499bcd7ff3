// SPDX-License-Identifier: Apache-2.0
#include "scrplab/propagate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "scrplab/hamiltonian.hpp"
#include "scrplab/operators.hpp"

namespace scrplab {

namespace {

struct ActiveTone {
  int transmon = 0;
  double start = 0.0;
  const PulseEnvelope* envelope = nullptr;
};

struct TimedRotation {
  double time = 0.0;
  IdealRotation rotation;
};

struct Timeline {
  std::vector<ActiveTone> tones;
  std::vector<TimedRotation> rotations;  // in application order
  double total = 0.0;
};

Timeline build_timeline(const Schedule& schedule) {
  Timeline tl;
  tl.total = schedule.total_duration();
  for (const auto& inst : schedule.instructions()) {
    if (const auto* cr = std::get_if<CRTone>(&inst.op)) {
      tl.tones.push_back({cr->control, inst.start, &cr->envelope});
    } else if (const auto* rot = std::get_if<RotaryTone>(&inst.op)) {
      tl.tones.push_back({rot->target, inst.start, &rot->envelope});
    } else if (const auto* ir = std::get_if<IdealRotation>(&inst.op)) {
      tl.rotations.push_back({inst.start, *ir});
    }
  }
  return tl;
}

/// exp(-i angle/2 sigma_axis) on the qubit levels of one transmon, identity above.
Matrix rotation_gate(const DeviceConfig& device, const IdealRotation& r) {
  const int d = device.transmon(r.qubit).levels;
  Matrix op = Matrix::Identity(d, d);
  const double c = std::cos(0.5 * r.angle);
  const double s = std::sin(0.5 * r.angle);
  switch (r.axis) {
    case 'X':
      op(0, 0) = c;
      op(1, 1) = c;
      op(0, 1) = Complex(0, -s);
      op(1, 0) = Complex(0, -s);
      break;
    case 'Y':
      op(0, 0) = c;
      op(1, 1) = c;
      op(0, 1) = -s;
      op(1, 0) = s;
      break;
    case 'Z':
      op(0, 0) = Complex(c, -s);
      op(1, 1) = Complex(c, s);
      break;
    default:
      throw ValidationError("rotation axis must be X, Y, or Z");
  }
  return embed_site(device, r.qubit, op);
}

class HamiltonianSampler {
 public:
  HamiltonianSampler(const DeviceConfig& device, const Timeline& timeline, double carrier)
      : frame_(make_rotating_frame(device, carrier)), timeline_(timeline) {}

  const Matrix& at(double t) {
    scratch_ = frame_.h_static;
    for (const auto& tone : timeline_.tones) {
      const Complex v = tone.envelope->value(t - tone.start);
      if (v == Complex(0.0, 0.0)) continue;
      const auto q = static_cast<size_t>(tone.transmon);
      if (v.real() != 0.0) scratch_ += v.real() * frame_.drive_x[q];
      if (v.imag() != 0.0) scratch_ += v.imag() * frame_.drive_y[q];
    }
    return scratch_;
  }

 private:
  RotatingFrame frame_;
  const Timeline& timeline_;
  Matrix scratch_;
};

/// Segment boundaries: schedule start/end plus every ideal-rotation timestamp.
std::vector<double> segment_edges(const Timeline& tl) {
  std::vector<double> edges{0.0, tl.total};
  for (const auto& r : tl.rotations) edges.push_back(r.time);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-18; }),
              edges.end());
  return edges;
}

template <typename StepFn>
Matrix run_timeline(const DeviceConfig& device, const Timeline& tl, double dt, StepFn step,
                    const Matrix& dressed_basis) {
  const long dim = device.fock_dimension();
  Matrix u = Matrix::Identity(dim, dim);
  const auto edges = segment_edges(tl);
  auto apply_rotations_at = [&](double t) {
    for (const auto& r : tl.rotations) {
      if (std::abs(r.time - t) < 1e-18) {
        const Matrix bare = rotation_gate(device, r.rotation);
        u = dressed_basis * bare * dressed_basis.adjoint() * u;
      }
    }
  };
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    apply_rotations_at(edges[e]);
    const double t0 = edges[e];
    const double len = edges[e + 1] - t0;
    if (len <= 0.0) continue;
    const long n = std::max<long>(1, static_cast<long>(std::ceil(len / dt - 1e-9)));
    const double h = len / static_cast<double>(n);
    for (long k = 0; k < n; ++k) step(t0 + static_cast<double>(k) * h, h, u);
  }
  apply_rotations_at(edges.back());
  return u;
}

}  // namespace

PropagationResult propagate(const Schedule& schedule, const DeviceConfig& device, double dt) {
  if (dt <= 0.0) throw ValidationError("time step must be positive");
  const Timeline tl = build_timeline(schedule);
  const double carrier = schedule.frame_carrier();
  HamiltonianSampler sampler(device, tl, carrier);
  const Matrix dressed =
      tl.rotations.empty() ? Matrix() : static_dressing(device, carrier).basis;

  Matrix k1, k2, k3, k4;
  auto rk4_step = [&](double t, double h, Matrix& u) {
    const Complex mi(0.0, -1.0);
    k1 = mi * (sampler.at(t) * u);
    const Matrix& h_mid = sampler.at(t + 0.5 * h);
    k2 = mi * (h_mid * (u + (0.5 * h) * k1));
    k3 = mi * (h_mid * (u + (0.5 * h) * k2));
    k4 = mi * (sampler.at(t + h) * (u + h * k3));
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  Matrix raw = run_timeline(device, tl, dt, rk4_step, dressed);

  const long dim = device.fock_dimension();
  const double drift = (raw.adjoint() * raw - Matrix::Identity(dim, dim)).norm();
  if (drift > 1e-6) {
    throw NumericalError("propagator unitarity drift " + std::to_string(drift) +
                         " exceeds 1e-6; reduce the time step");
  }
  return {polar_unitary(raw), drift};
}

Matrix propagate_reference(const Schedule& schedule, const DeviceConfig& device, double dt) {
  if (dt <= 0.0) throw ValidationError("time step must be positive");
  const Timeline tl = build_timeline(schedule);
  const double carrier = schedule.frame_carrier();
  HamiltonianSampler sampler(device, tl, carrier);
  const Matrix dressed =
      tl.rotations.empty() ? Matrix() : static_dressing(device, carrier).basis;

  auto expm_step = [&](double t, double h, Matrix& u) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sampler.at(t + 0.5 * h));
    const auto& vecs = es.eigenvectors();
    Vector phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
      phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * h));
    }
    u = vecs * phases.asDiagonal() * vecs.adjoint() * u;
  };
  return run_timeline(device, tl, dt, expm_step, dressed);
}

SubspaceProjection project_to_qubit_subspace(const Matrix& u, const DeviceConfig& device) {
  const auto comp = computational_indices(device);
  const Matrix raw = computational_block(u, comp);
  const double dim = static_cast<double>(raw.rows());
  SubspaceProjection out;
  out.leakage = 1.0 - raw.squaredNorm() / dim;
  out.unitary = polar_unitary(raw);
  return out;
}

SubspaceProjection project_to_qubit_subspace(const Matrix& u, const DeviceConfig& device,
                                             const Matrix& dressed_basis) {
  return project_to_qubit_subspace(dressed_basis.adjoint() * u * dressed_basis, device);
}

}  // namespace scrplab
