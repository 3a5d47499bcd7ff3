// SPDX-License-Identifier: Apache-2.0
//
// One-shot helper: solve the parity-gate CR amplitudes for the bundled 7-transmon
// device at the shipped pulse geometry and print them at full precision, so the
// frozen constants in default_scrp_calibration() can be kept in sync.

#include <cstdio>

#include "scrplab/device.hpp"
#include "scrplab/heat.hpp"

int main() {
  using namespace scrplab;
  const DeviceConfig device = paper_triplet();
  ScrpSolveOptions options;
  options.tolerance = 1e-9;
  options.rounds = 4;
  const ScrpAmplitudeSolve solve = solve_scrp_amplitudes(device, 184.9e-9, 4e-9, options);
  std::printf("omega1 = %.12e rad/s  (%.6f MHz)\n", solve.omega1, solve.omega1 / kTwoPi / 1e6);
  std::printf("omega2 = %.12e rad/s  (%.6f MHz)\n", solve.omega2, solve.omega2 / kTwoPi / 1e6);
  std::printf("psi1 = %.12f  psi2 = %.12f\n", solve.psi1, solve.psi2);
  std::printf("residual = %.3e  evaluations = %d\n", solve.residual, solve.evaluations);
  return 0;
}
