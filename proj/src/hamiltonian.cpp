// SPDX-License-Identifier: Apache-2.0

#include "scrplab/hamiltonian.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "scrplab/operators.hpp"

namespace scrplab {

namespace {

Matrix assemble(const DeviceConfig& device, const std::vector<double>& site_freqs) {
  const long dim = device.fock_dimension();
  Matrix h = Matrix::Zero(dim, dim);
  const int n = device.num_transmons();
  std::vector<Matrix> lowering(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) {
    const int d = device.transmon(q).levels;
    lowering[static_cast<size_t>(q)] = embed_site(device, q, destroy_op(d));
    const Matrix num = embed_site(device, q, number_op(d));
    const double alpha = device.transmon(q).anharmonicity;
    // w n + (alpha/2) a^† a^† a a  =  w n + (alpha/2) n (n - 1)
    h += site_freqs[static_cast<size_t>(q)] * num + 0.5 * alpha * (num * num - num);
  }
  for (const auto& c : device.couplings()) {
    const Matrix& aa = lowering[static_cast<size_t>(c.a)];
    const Matrix& ab = lowering[static_cast<size_t>(c.b)];
    h += c.strength * (aa.adjoint() * ab + ab.adjoint() * aa);
  }
  return h;
}

}  // namespace

Matrix build_static_hamiltonian(const DeviceConfig& device) {
  std::vector<double> freqs;
  freqs.reserve(static_cast<size_t>(device.num_transmons()));
  for (const auto& t : device.transmons()) freqs.push_back(t.frequency);
  return assemble(device, freqs);
}

Matrix build_rotating_frame_hamiltonian(const DeviceConfig& device,
                                        const std::vector<DriveSpec>& drives) {
  double carrier = drives.empty() ? 0.0 : drives.front().carrier;
  for (const auto& d : drives) {
    if (d.carrier != carrier) throw ValidationError("all drives must share one carrier");
  }
  std::vector<double> detunings;
  detunings.reserve(static_cast<size_t>(device.num_transmons()));
  for (const auto& t : device.transmons()) detunings.push_back(t.frequency - carrier);
  Matrix h = assemble(device, detunings);
  for (const auto& d : drives) {
    const Matrix a = embed_site(device, d.target_transmon,
                                destroy_op(device.transmon(d.target_transmon).levels));
    h += 0.5 * (std::conj(d.amplitude) * a + d.amplitude * a.adjoint());
  }
  return h;
}

RotatingFrame make_rotating_frame(const DeviceConfig& device, double carrier) {
  RotatingFrame frame;
  frame.carrier = carrier;
  frame.h_static = build_rotating_frame_hamiltonian(device, {{0, {0.0, 0.0}, carrier}});
  const int n = device.num_transmons();
  frame.drive_x.reserve(static_cast<size_t>(n));
  frame.drive_y.reserve(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) {
    const Matrix a = embed_site(device, q, destroy_op(device.transmon(q).levels));
    frame.drive_x.push_back(0.5 * (a + a.adjoint()));
    frame.drive_y.push_back(Complex(0, 0.5) * (a.adjoint() - a));
  }
  return frame;
}

Dressing matched_eigenbasis(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Matrix& v = es.eigenvectors();
  const RealVector& w = es.eigenvalues();
  const long dim = h.rows();

  // Greedy max-overlap assignment of eigenvectors to bare states.
  struct Entry {
    double overlap;
    long bare;
    long col;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(dim * dim));
  for (long b = 0; b < dim; ++b) {
    for (long c = 0; c < dim; ++c) entries.push_back({std::norm(v(b, c)), b, c});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.overlap > y.overlap; });
  std::vector<long> col_of_bare(static_cast<size_t>(dim), -1);
  std::vector<bool> used(static_cast<size_t>(dim), false);
  long assigned = 0;
  for (const auto& e : entries) {
    if (col_of_bare[static_cast<size_t>(e.bare)] >= 0 || used[static_cast<size_t>(e.col)]) continue;
    col_of_bare[static_cast<size_t>(e.bare)] = e.col;
    used[static_cast<size_t>(e.col)] = true;
    if (++assigned == dim) break;
  }

  Dressing d;
  d.basis = Matrix::Zero(dim, dim);
  d.energies = RealVector::Zero(dim);
  for (long b = 0; b < dim; ++b) {
    const long c = col_of_bare[static_cast<size_t>(b)];
    Vector col = v.col(c);
    // Fix the global phase so the bare component is real and positive.
    const Complex amp = col(b);
    if (std::abs(amp) > 1e-14) col *= std::conj(amp) / std::abs(amp);
    d.basis.col(b) = col;
    d.energies(b) = w(c);
  }
  return d;
}

Dressing static_dressing(const DeviceConfig& device, double carrier) {
  return matched_eigenbasis(build_rotating_frame_hamiltonian(device, {{0, {0.0, 0.0}, carrier}}));
}

double dressed_transition_frequency(const DeviceConfig& device, int target, long config) {
  // Dressed energies are carrier-independent up to the frame shift w_c * (total excitation),
  // which cancels in the 0->1 difference except for the carrier itself; evaluate in the
  // lab frame (carrier 0) for an absolute frequency.
  const Dressing d = static_dressing(device, 0.0);
  const auto comp = computational_indices(device);
  const long base = config & ~(1L << target);
  const long excited = base | (1L << target);
  return d.energies(comp[static_cast<size_t>(excited)]) -
         d.energies(comp[static_cast<size_t>(base)]);
}

double echo_frame_frequency(const DeviceConfig& device, int target,
                            const std::vector<int>& controls) {
  const Dressing d = static_dressing(device, 0.0);
  const auto comp = computational_indices(device);
  double sum = 0.0;
  const long m = 1L << controls.size();
  for (long cfg = 0; cfg < m; ++cfg) {
    long base = 0;
    for (size_t k = 0; k < controls.size(); ++k) {
      if ((cfg >> k) & 1L) base |= 1L << controls[k];
    }
    const long excited = base | (1L << target);
    sum += d.energies(comp[static_cast<size_t>(excited)]) -
           d.energies(comp[static_cast<size_t>(base)]);
  }
  return sum / static_cast<double>(m);
}

}  // namespace scrplab
