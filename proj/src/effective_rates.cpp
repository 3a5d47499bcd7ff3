// SPDX-License-Identifier: Apache-2.0
#include "scrplab/effective_rates.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "scrplab/hamiltonian.hpp"
#include "scrplab/operators.hpp"
#include "scrplab/pauli.hpp"
#include "scrplab/propagate.hpp"
#include "scrplab/pulse.hpp"

namespace scrplab {

namespace {

/// Guard a perturbative denominator against (near-)resonance.
double checked_denominator(double value, const std::string& name, double scale) {
  if (std::abs(value) < 1e-6 * scale) {
    throw NumericalError("perturbative resonance: denominator " + name +
                         " vanishes (|value| = " + std::to_string(std::abs(value)) + " rad/s)");
  }
  return value;
}

struct BranchParams {
  double delta;    // control-target detuning
  double alpha_c;  // control anharmonicity
  double alpha_t;  // target anharmonicity
  double j;        // exchange coupling
};

BranchParams branch_params(const DeviceConfig& device, int control, int target) {
  BranchParams p;
  p.delta = device.transmon(control).frequency - device.transmon(target).frequency;
  p.alpha_c = device.transmon(control).anharmonicity;
  p.alpha_t = device.transmon(target).anharmonicity;
  p.j = device.coupling(control, target);
  return p;
}

}  // namespace

EffectiveRates perturbative_rates(const DeviceConfig& device, double omega_c1, double omega_c2,
                                  double omega_t) {
  const int c1 = device.role("c1"), c2 = device.role("c2"), t = device.role("t");
  const BranchParams a = branch_params(device, c1, t);
  const BranchParams b = branch_params(device, c2, t);
  const double scale_a = std::abs(a.delta) + std::abs(a.alpha_c) + kTwoPi * 1e6;
  const double scale_b = std::abs(b.delta) + std::abs(b.alpha_c) + kTwoPi * 1e6;

  EffectiveRates r;
  // Static ZZ of each control-target branch.
  r.zzi = a.j * a.j / checked_denominator(a.delta - a.alpha_t, "delta_c1t - alpha_t", scale_a) -
          a.j * a.j / checked_denominator(a.delta + a.alpha_c, "delta_c1t + alpha_c1", scale_a);
  r.izz = b.j * b.j / checked_denominator(b.delta - b.alpha_c, "delta_c2t - alpha_c2", scale_b) -
          b.j * b.j / checked_denominator(b.delta + b.alpha_c, "delta_c2t + alpha_c2", scale_b);
  // Conditional rotations, each linear in its own drive only.
  r.zxi = -a.j * a.alpha_c * omega_c1 /
          (checked_denominator(a.delta, "delta_c1t", scale_a) *
           checked_denominator(a.delta + a.alpha_c, "delta_c1t + alpha_c1", scale_a));
  r.ixz = -b.j * b.alpha_c * omega_c2 /
          (checked_denominator(b.delta, "delta_c2t", scale_b) *
           checked_denominator(b.delta + b.alpha_c, "delta_c2t + alpha_c2", scale_b));
  // Unconditional target rotation: direct drive plus both crosstalk paths.
  r.ixi = omega_t -
          a.j * omega_c1 / checked_denominator(a.delta + a.alpha_c, "delta_c1t + alpha_c1", scale_a) -
          b.j * omega_c2 / checked_denominator(b.delta + b.alpha_c, "delta_c2t + alpha_c2", scale_b);
  return r;
}

double ExtractedHamiltonian::rate(const std::string& label) const {
  auto it = coefficients.find(label);
  return it == coefficients.end() ? 0.0 : 2.0 * it->second.real();
}

namespace {

int qubit_count(const Matrix& u) {
  int n = 0;
  while ((Eigen::Index(1) << n) < u.rows()) ++n;
  if ((Eigen::Index(1) << n) != u.rows()) {
    throw ValidationError("operator dimension is not a power of two");
  }
  return n;
}

/// Zero the matrix elements connecting different control-basis blocks.
Matrix controls_diagonal_part(const Matrix& u, const std::vector<int>& control_qubits) {
  Matrix blocked = u;
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      for (int q : control_qubits) {
        if (((r >> q) & 1) != ((c >> q) & 1)) {
          blocked(r, c) = Complex(0.0, 0.0);
          break;
        }
      }
    }
  }
  return blocked;
}

/// Hermitian phase matrix Phi with u = exp(i.Phi), principal branch, via the Schur
/// form (whose basis is exactly unitary even for clustered eigenvalues). Throws when
/// an eigenphase sits within guard_rad of the +-pi branch cut.
Matrix principal_phase_matrix(const Matrix& u, double branch_guard_rad) {
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& q = schur.matrixU();
  Vector phases(u.rows());
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const double phi = std::arg(schur.matrixT()(k, k));
    if (branch_guard_rad > 0.0 && M_PI - std::abs(phi) < branch_guard_rad) {
      throw NumericalError("matrix-log branch ambiguity: eigenphase " + std::to_string(phi) +
                           " rad lies within " + std::to_string(branch_guard_rad) +
                           " rad of the +-pi cut");
    }
    phases(k) = Complex(phi, 0.0);
  }
  return q * phases.asDiagonal() * q.adjoint();
}

}  // namespace

ExtractedHamiltonian extract_effective_hamiltonian(const Matrix& u, double t_g,
                                                   const std::vector<int>& control_qubits,
                                                   bool double_gate_divisor) {
  if (t_g <= 0.0) throw ValidationError("gate time must be positive");
  const int n = qubit_count(u);
  for (int q : control_qubits) {
    if (q < 0 || q >= n) throw ValidationError("control qubit index out of range");
  }
  const Matrix blocked = controls_diagonal_part(u, control_qubits);
  const double residual = (u - blocked).norm() / u.norm();
  if (residual > 1e-3) {
    throw ValidationError("off-block leakage " + std::to_string(residual) +
                          " exceeds 1e-3; the controls-diagonal model does not apply");
  }
  const Matrix unit = polar_unitary(blocked);
  // u = exp(i Phi) => i log(u) = -Phi, and for u = exp(-i H t) this gives +H t.
  const Matrix h_times_t = -principal_phase_matrix(unit, 1e-3);
  const double divisor = double_gate_divisor ? 2.0 * t_g : t_g;

  ExtractedHamiltonian out;
  out.off_block_residual = residual;
  out.coefficients = pauli_decompose(h_times_t / divisor);
  return out;
}

namespace {

/// Bare detuning phase (rad/s) of computational state `r` in the frame at the bare
/// target frequency.
double bare_detuning(const DeviceConfig& device, double carrier, Eigen::Index r) {
  double e = 0.0;
  for (int q = 0; q < device.num_transmons(); ++q) {
    if ((r >> q) & 1) e += device.transmon(q).frequency - carrier;
  }
  return e;
}

/// Accumulated phase matrix over one flat-top pulse, bare detunings removed.
Matrix accumulated_phase(const DeviceConfig& device, double omega_c1, double omega_c2,
                         double omega_t, double flat, const TimeDomainConfig& cfg,
                         const Matrix& basis, double* leakage_out) {
  const int c1 = device.role("c1"), c2 = device.role("c2"), t = device.role("t");
  const double carrier = device.transmon(t).frequency;
  const double duration = flat + 8.0 * cfg.rise_sigma;

  auto tone = [&](int transmon, double amp) {
    FlatTopGaussian p;
    p.amplitude = Complex(amp, 0.0);
    p.duration = duration;
    p.rise_sigma = cfg.rise_sigma;
    p.flat_width = flat;
    return Instruction{CRTone{transmon, carrier, PulseEnvelope{p}}, 0.0};
  };
  const Schedule schedule({tone(c1, omega_c1), tone(c2, omega_c2), tone(t, omega_t)});

  const Matrix u = propagate(schedule, device, cfg.dt).unitary;
  const SubspaceProjection proj = project_to_qubit_subspace(u, device, basis);
  if (leakage_out) *leakage_out = proj.leakage;
  Matrix block = proj.unitary;
  for (Eigen::Index r = 0; r < block.rows(); ++r) {
    block.row(r) *= std::exp(Complex(0.0, bare_detuning(device, carrier, r) * duration));
  }
  // No branch guard here: the pair difference below is taken on phase matrices from
  // the same branch window, and weak-drive phases stay far from the cut.
  return -principal_phase_matrix(block, 0.0);
}

}  // namespace

RateTable extract_rates_time_domain(const DeviceConfig& device, double omega_c1, double omega_c2,
                                    double omega_t, const TimeDomainConfig& cfg) {
  if (cfg.flat_b <= cfg.flat_a) throw ValidationError("flat_b must exceed flat_a");
  const Matrix basis = static_dressing(device, device.transmon(device.role("t")).frequency).basis;
  double leakage = 0.0;
  const Matrix phi_a =
      accumulated_phase(device, omega_c1, omega_c2, omega_t, cfg.flat_a, cfg, basis, nullptr);
  const Matrix phi_b =
      accumulated_phase(device, omega_c1, omega_c2, omega_t, cfg.flat_b, cfg, basis, &leakage);
  const Matrix h_eff = (phi_b - phi_a) / (cfg.flat_b - cfg.flat_a);

  RateTable out;
  out.off_block_residual = std::sqrt(std::max(0.0, leakage));
  for (const auto& [label, coeff] : pauli_decompose(h_eff)) out.omega[label] = 2.0 * coeff.real();
  return out;
}

RateTable extract_rates_spectral(const DeviceConfig& device, double omega_c1, double omega_c2,
                                 double omega_t) {
  const int c1 = device.role("c1"), c2 = device.role("c2"), t = device.role("t");
  const double carrier = device.transmon(t).frequency;
  const Matrix h = build_rotating_frame_hamiltonian(device, {{c1, {omega_c1, 0.0}, carrier},
                                                             {c2, {omega_c2, 0.0}, carrier},
                                                             {t, {omega_t, 0.0}, carrier}});
  const Dressing d = matched_eigenbasis(h);
  const auto comp = computational_indices(device);
  const auto dim = static_cast<Eigen::Index>(comp.size());

  Matrix w(dim, dim);
  RealVector energies(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      w(r, k) = d.basis(comp[static_cast<size_t>(r)], comp[static_cast<size_t>(k)]);
    }
    energies(k) = d.energies(comp[static_cast<size_t>(k)]) - bare_detuning(device, carrier, k);
  }
  const Matrix wq = polar_unitary(w);
  Matrix h_eff = wq * energies.cast<Complex>().asDiagonal() * wq.adjoint();

  RateTable out;
  out.off_block_residual = std::sqrt(std::max(0.0, 1.0 - w.squaredNorm() / double(dim)));
  for (const auto& [label, coeff] : pauli_decompose(h_eff)) out.omega[label] = 2.0 * coeff.real();
  return out;
}

std::vector<ScanRow> cross_drive_scan(const DeviceConfig& device, const std::vector<double>& c1_grid,
                                      const std::vector<double>& c2_grid) {
  const int c1 = device.role("c1"), c2 = device.role("c2"), t = device.role("t");
  const double window_1 =
      std::abs(device.transmon(c1).frequency - device.transmon(t).frequency) / 3.0;
  const double window_2 =
      std::abs(device.transmon(c2).frequency - device.transmon(t).frequency) / 3.0;
  std::vector<ScanRow> rows;
  for (double a1 : c1_grid) {
    if (std::abs(a1) > window_1) {
      throw ValidationError("c1 amplitude outside the weak-drive window |delta|/3");
    }
    for (double a2 : c2_grid) {
      if (std::abs(a2) > window_2) {
        throw ValidationError("c2 amplitude outside the weak-drive window |delta|/3");
      }
      const RateTable table = extract_rates_spectral(device, a1, a2, 0.0);
      ScanRow row;
      row.omega_c1 = a1;
      row.omega_c2 = a2;
      row.zxi = table.omega.at("ZXI");
      row.ixz = table.omega.at("IXZ");
      row.zxz = table.omega.at("ZXZ");
      row.ixi = table.omega.at("IXI");
      rows.push_back(row);
    }
  }
  return rows;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("log-log fit needs two or more points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || y[i] == 0.0) {
      throw ValidationError("log-log fit requires positive x and nonzero y");
    }
    const double lx = std::log(std::abs(x[i]));
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace scrplab
