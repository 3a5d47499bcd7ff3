// SPDX-License-Identifier: Apache-2.0
//
// Device parameterization: transmon parameters, exchange couplings, role labels,
// and JSON config ingestion. All stored quantities use rad/s and seconds.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scrplab/common.hpp"

namespace scrplab {

struct TransmonParams {
  double frequency = 0.0;      ///< rad/s
  double anharmonicity = 0.0;  ///< rad/s
  double t1 = 0.0;             ///< s
  double t2 = 0.0;             ///< s
  int levels = 3;
};

struct Coupling {
  int a = 0;
  int b = 0;
  double strength = 0.0;  ///< rad/s
};

/// Immutable collection of transmons, exchange couplings, and optional role labels.
class DeviceConfig {
 public:
  DeviceConfig(std::vector<TransmonParams> transmons, std::vector<Coupling> couplings,
               std::map<std::string, int> roles = {});

  int num_transmons() const { return static_cast<int>(transmons_.size()); }
  const TransmonParams& transmon(int i) const;
  const std::vector<TransmonParams>& transmons() const { return transmons_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }
  const std::map<std::string, int>& roles() const { return roles_; }

  /// Coupling strength between a and b (order-insensitive); 0 if uncoupled.
  double coupling(int a, int b) const;
  bool coupled(int a, int b) const { return coupling(a, b) != 0.0; }

  /// Index of the transmon carrying a role label; throws ValidationError if absent.
  int role(const std::string& label) const;
  bool has_role(const std::string& label) const { return roles_.count(label) > 0; }

  /// Total Fock dimension (product of level counts).
  long fock_dimension() const;

  std::string to_json_text() const;

 private:
  void validate() const;

  std::vector<TransmonParams> transmons_;
  std::vector<Coupling> couplings_;
  std::map<std::string, int> roles_;
};

/// Parse and validate a JSON device description.
///
/// Schema (units in the names):
///   {"transmons": [{"frequency_ghz": 5.2, "anharmonicity_mhz": -340,
///                   "t1_us": 130, "t2_us": 110, "levels": 3}, ...],
///    "couplings": [{"pair": [0, 1], "strength_mhz": 2.0}, ...],
///    "roles": {"c1": 0, "t": 1, "c2": 2}}
DeviceConfig load_device_config(const std::string& json_text);

/// Load a device config from a file path.
DeviceConfig load_device_config_file(const std::string& path);

/// The 7-transmon heavy-hexagon X-parity device used throughout: hardware qubits
/// (5, 8, 9, 11, 13, 14, 16) mapped to indices 0..6, tree couplings, and role labels
/// D1..D4 (data), F1/F2 (flags), S (syndrome) plus the gate triplet c1/t/c2 = F1/S/F2.
DeviceConfig paper_device();

/// The 3-transmon (c1, t, c2) chain cut out of paper_device(), indices 0/1/2,
/// both controls coupled to the shared target.
DeviceConfig paper_triplet();

/// paper_triplet() truncated to two levels per transmon: a pure-exchange qubit model
/// with no anharmonic ladder, so static multi-level shifts vanish and drive-induced
/// interaction terms can be scanned in isolation.
DeviceConfig qubit_limit_triplet();

}  // namespace scrplab
