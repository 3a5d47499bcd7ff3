// SPDX-License-Identifier: Apache-2.0

#include "scrplab/device.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace scrplab {

using nlohmann::json;

DeviceConfig::DeviceConfig(std::vector<TransmonParams> transmons, std::vector<Coupling> couplings,
                           std::map<std::string, int> roles)
    : transmons_(std::move(transmons)), couplings_(std::move(couplings)), roles_(std::move(roles)) {
  validate();
}

const TransmonParams& DeviceConfig::transmon(int i) const {
  if (i < 0 || i >= num_transmons()) {
    throw ValidationError("transmon index " + std::to_string(i) + " out of range");
  }
  return transmons_[static_cast<size_t>(i)];
}

double DeviceConfig::coupling(int a, int b) const {
  for (const auto& c : couplings_) {
    if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) return c.strength;
  }
  return 0.0;
}

int DeviceConfig::role(const std::string& label) const {
  auto it = roles_.find(label);
  if (it == roles_.end()) throw ValidationError("device has no role '" + label + "'");
  return it->second;
}

long DeviceConfig::fock_dimension() const {
  long d = 1;
  for (const auto& t : transmons_) d *= t.levels;
  return d;
}

void DeviceConfig::validate() const {
  if (transmons_.empty()) throw ValidationError("device must declare at least one transmon");
  for (size_t i = 0; i < transmons_.size(); ++i) {
    const auto& t = transmons_[i];
    const std::string path = "transmons[" + std::to_string(i) + "]";
    if (!(t.frequency > 0)) throw ValidationError(path + ".frequency must be > 0");
    if (t.anharmonicity == 0.0) throw ValidationError(path + ".anharmonicity must be nonzero");
    if (!(t.t1 > 0)) throw ValidationError(path + ".t1 must be > 0");
    if (!(t.t2 > 0 && t.t2 <= 2.0 * t.t1)) {
      throw ValidationError(path + ".t2 must satisfy 0 < t2 <= 2*t1");
    }
    if (t.levels < 2) throw ValidationError(path + ".levels must be >= 2");
  }
  for (size_t i = 0; i < couplings_.size(); ++i) {
    const auto& c = couplings_[i];
    const std::string path = "couplings[" + std::to_string(i) + "]";
    if (c.a == c.b) throw ValidationError(path + ".pair indices must be distinct");
    if (c.a < 0 || c.a >= num_transmons() || c.b < 0 || c.b >= num_transmons()) {
      throw ValidationError(path + ".pair index out of range");
    }
    for (size_t j = 0; j < i; ++j) {
      const auto& o = couplings_[j];
      if ((o.a == c.a && o.b == c.b) || (o.a == c.b && o.b == c.a)) {
        throw ValidationError(path + " duplicates an earlier coupling");
      }
    }
  }
  for (const auto& [label, idx] : roles_) {
    if (idx < 0 || idx >= num_transmons()) {
      throw ValidationError("roles." + label + " index out of range");
    }
  }
  // A declared SCRP triplet must form a two-control/one-target star.
  if (roles_.count("c1") && roles_.count("c2") && roles_.count("t")) {
    const int c1 = roles_.at("c1"), c2 = roles_.at("c2"), t = roles_.at("t");
    if (!coupled(c1, t) || !coupled(c2, t)) {
      throw ValidationError("roles c1/c2 must both couple to role t");
    }
    if (coupled(c1, c2)) throw ValidationError("roles c1 and c2 must not be mutually coupled");
  }
}

std::string DeviceConfig::to_json_text() const {
  json j;
  j["transmons"] = json::array();
  for (const auto& t : transmons_) {
    j["transmons"].push_back({{"frequency_ghz", t.frequency / (kTwoPi * 1e9)},
                              {"anharmonicity_mhz", t.anharmonicity / (kTwoPi * 1e6)},
                              {"t1_us", t.t1 * 1e6},
                              {"t2_us", t.t2 * 1e6},
                              {"levels", t.levels}});
  }
  j["couplings"] = json::array();
  for (const auto& c : couplings_) {
    j["couplings"].push_back({{"pair", {c.a, c.b}}, {"strength_mhz", c.strength / (kTwoPi * 1e6)}});
  }
  if (!roles_.empty()) j["roles"] = roles_;
  return j.dump(2);
}

namespace {

double require_number(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ValidationError(path + "." + key + " missing or not a number");
  }
  return j[key].get<double>();
}

}  // namespace

DeviceConfig load_device_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("device config parse error: ") + e.what());
  }
  if (!j.contains("transmons") || !j["transmons"].is_array() || j["transmons"].empty()) {
    throw ValidationError("transmons must be a non-empty array");
  }
  std::vector<TransmonParams> transmons;
  for (size_t i = 0; i < j["transmons"].size(); ++i) {
    const auto& tj = j["transmons"][i];
    const std::string path = "transmons[" + std::to_string(i) + "]";
    TransmonParams t;
    t.frequency = ghz_to_rad(require_number(tj, path, "frequency_ghz"));
    t.anharmonicity = mhz_to_rad(require_number(tj, path, "anharmonicity_mhz"));
    t.t1 = us_to_s(require_number(tj, path, "t1_us"));
    t.t2 = us_to_s(require_number(tj, path, "t2_us"));
    t.levels = tj.value("levels", 3);
    transmons.push_back(t);
  }
  std::vector<Coupling> couplings;
  if (j.contains("couplings")) {
    for (size_t i = 0; i < j["couplings"].size(); ++i) {
      const auto& cj = j["couplings"][i];
      const std::string path = "couplings[" + std::to_string(i) + "]";
      if (!cj.contains("pair") || !cj["pair"].is_array() || cj["pair"].size() != 2) {
        throw ValidationError(path + ".pair must be a 2-element array");
      }
      Coupling c;
      c.a = cj["pair"][0].get<int>();
      c.b = cj["pair"][1].get<int>();
      c.strength = mhz_to_rad(require_number(cj, path, "strength_mhz"));
      couplings.push_back(c);
    }
  }
  std::map<std::string, int> roles;
  if (j.contains("roles")) {
    for (const auto& [key, val] : j["roles"].items()) roles[key] = val.get<int>();
  }
  return DeviceConfig(std::move(transmons), std::move(couplings), std::move(roles));
}

DeviceConfig load_device_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open device config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_device_config(ss.str());
}

namespace {

TransmonParams make_transmon(double f_ghz, double t1_us, double t2_us, int levels = 3) {
  TransmonParams t;
  t.frequency = ghz_to_rad(f_ghz);
  t.anharmonicity = mhz_to_rad(-340.0);
  t.t1 = us_to_s(t1_us);
  t.t2 = us_to_s(t2_us);
  t.levels = levels;
  return t;
}

constexpr double kDefaultT1Us = 130.0;
constexpr double kDefaultT2Us = 110.0;

}  // namespace

DeviceConfig paper_device() {
  // Hardware qubits (5, 8, 9, 11, 13, 14, 16) -> indices 0..6.
  std::vector<TransmonParams> transmons = {
      make_transmon(4.99282, kDefaultT1Us, kDefaultT2Us),  // 0: D1 (hw 5)
      make_transmon(5.20360, 122.7, 73.4),                 // 1: F1 = c1 (hw 8)
      make_transmon(5.08839, kDefaultT1Us, kDefaultT2Us),  // 2: D2 (hw 9)
      make_transmon(5.05517, 134.8, 111.4),                // 3: S = t (hw 11)
      make_transmon(5.01678, kDefaultT1Us, kDefaultT2Us),  // 4: D3 (hw 13)
      make_transmon(5.16698, 159.7, 170.3),                // 5: F2 = c2 (hw 14)
      make_transmon(4.96965, kDefaultT1Us, kDefaultT2Us),  // 6: D4 (hw 16)
  };
  const double j = mhz_to_rad(2.0);
  std::vector<Coupling> couplings = {{0, 1, j}, {2, 1, j}, {1, 3, j},
                                     {3, 5, j}, {4, 5, j}, {6, 5, j}};
  std::map<std::string, int> roles = {{"D1", 0}, {"F1", 1}, {"D2", 2}, {"S", 3}, {"D3", 4},
                                      {"F2", 5}, {"D4", 6}, {"c1", 1}, {"t", 3},  {"c2", 5}};
  return DeviceConfig(std::move(transmons), std::move(couplings), std::move(roles));
}

DeviceConfig paper_triplet() {
  std::vector<TransmonParams> transmons = {
      make_transmon(5.20360, 122.7, 73.4),    // c1
      make_transmon(5.05517, 134.8, 111.4),   // t
      make_transmon(5.16698, 159.7, 170.3),   // c2
  };
  const double j = mhz_to_rad(2.0);
  std::vector<Coupling> couplings = {{0, 1, j}, {1, 2, j}};
  std::map<std::string, int> roles = {{"c1", 0}, {"t", 1}, {"c2", 2}};
  return DeviceConfig(std::move(transmons), std::move(couplings), std::move(roles));
}

DeviceConfig qubit_limit_triplet() {
  std::vector<TransmonParams> transmons = {
      make_transmon(5.20360, 122.7, 73.4, 2),
      make_transmon(5.05517, 134.8, 111.4, 2),
      make_transmon(5.16698, 159.7, 170.3, 2),
  };
  const double j = mhz_to_rad(2.0);
  std::vector<Coupling> couplings = {{0, 1, j}, {1, 2, j}};
  std::map<std::string, int> roles = {{"c1", 0}, {"t", 1}, {"c2", 2}};
  return DeviceConfig(std::move(transmons), std::move(couplings), std::move(roles));
}

}  // namespace scrplab
