// SPDX-License-Identifier: Apache-2.0
//
// scrplab: command-line front end tying the library modules into reproducible
// experiments with machine-readable outputs.
//
// Subcommands: rates, calibrate, irb, parity-exp, optimize, coherence-limit,
// dump-schedule. Exit codes: 0 success, 1 validation error (bad flags, bad
// files, precondition violations), 2 numerical failure.
//
// Every run builds a manifest {subcommand, resolved config snapshot, seed,
// tool version, wall-clock duration}. JSON outputs embed it under "manifest";
// CSV outputs reference a sibling JSON file in a leading "# manifest:"
// comment, so re-running with the same seed reproduces every CSV byte for
// byte and every JSON up to the single wall_time_seconds field.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "scrplab/channels.hpp"
#include "scrplab/clifford_rb.hpp"
#include "scrplab/common.hpp"
#include "scrplab/device.hpp"
#include "scrplab/effective_rates.hpp"
#include "scrplab/heat.hpp"
#include "scrplab/optimizer.hpp"
#include "scrplab/pulse.hpp"
#include "scrplab/qec_experiments.hpp"

namespace {

using nlohmann::json;
using namespace scrplab;

constexpr const char* kToolVersion = "scrplab 1.0.0";
constexpr std::uint64_t kDefaultSeed = 0x5eed;  // 24301
constexpr const char* kDeviceEnvVar = "SCRPLAB_DEVICE";

const char* kUsage = R"(usage: scrplab <subcommand> [--flag value ...]

subcommands:
  coherence-limit  --gate-length <ns> [--qubits i,j,k] [--out report.json]
                   print the damping-limited average gate infidelity
  rates            [--omega-c1-mhz x] [--omega-c2-mhz x] [--omega-t-mhz x] [--out table.csv]
                   closed-form vs. numerically extracted conditional rates (CSV)
  calibrate        [--triplet i,j,k] [--sweep-max <MHz>] [--half-ns x] [--two-level on]
                   [--fast on|off] [--repetitions N] [--shots N] [--out report.json]
                   50-point rotary-amplitude sweep, report best amplitude + cost curve
  irb              [--lengths 2,3,...] [--samples N] [--shots N]
                   [--interleave none|twocx|scrp] [--executor ideal|depolarizing|damping]
                   [--p x] [--line i,j,k] [--out-dir DIR]
                   interleaved randomized benchmarking (JSON + per-circuit CSV)
  parity-exp       [--impl twocx|scrp] [--dd on|off] [--shots N] [--x-ns x]
                   [--idle-z-rate x] [--readout-flip p] [--out-dir DIR]
                   X-parity check under damping noise, errors over all 16 inputs
  optimize         --in circuit.json [--out circuit.json] [--report report.json]
                   SWAP-chain rewrite + CX-pair fusion with built-in verification
  dump-schedule    [--gate scrp|ecr] [--dressing on|off] [--rotary-mhz x]
                   [--half-ns x] [--sigma-ns x] [--out schedule.json]
                   serialize a pulse schedule for inspection

global flags: --device <path> (JSON device file; default builtin, overridable
via the SCRPLAB_DEVICE environment variable), --seed <int> (default 24301),
--threads <n> (default: hardware concurrency).
)";

// ---------------------------------------------------------------------------
// Flag parsing

struct Options {
  std::string subcommand;
  std::map<std::string, std::string> flags;

  bool has(const std::string& key) const { return flags.count(key) != 0; }

  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = flags.find(key);
    return it == flags.end() ? fallback : it->second;
  }

  std::string require(const std::string& key) const {
    auto it = flags.find(key);
    if (it == flags.end()) throw ValidationError("missing required flag --" + key);
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const std::string& text = flags.at(key);
    try {
      std::size_t used = 0;
      const double value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return value;
    } catch (const std::exception&) {
      throw ValidationError("flag --" + key + " expects a number, got '" + text + "'");
    }
  }

  long long get_int(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const std::string& text = flags.at(key);
    try {
      std::size_t used = 0;
      const long long value = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return value;
    } catch (const std::exception&) {
      throw ValidationError("flag --" + key + " expects an integer, got '" + text + "'");
    }
  }

  bool get_switch(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& text = flags.at(key);
    if (text == "on" || text == "true" || text == "1") return true;
    if (text == "off" || text == "false" || text == "0") return false;
    throw ValidationError("flag --" + key + " expects on|off, got '" + text + "'");
  }

  std::string get_choice(const std::string& key, const std::string& fallback,
                         const std::vector<std::string>& allowed) const {
    const std::string value = get(key, fallback);
    if (std::find(allowed.begin(), allowed.end(), value) == allowed.end()) {
      std::string msg = "flag --" + key + " expects one of {";
      for (std::size_t i = 0; i < allowed.size(); ++i)
        msg += (i ? ", " : "") + allowed[i];
      throw ValidationError(msg + "}, got '" + value + "'");
    }
    return value;
  }

  void check_allowed(const std::vector<std::string>& specific) const {
    std::vector<std::string> allowed = {"device", "seed", "threads"};
    allowed.insert(allowed.end(), specific.begin(), specific.end());
    for (const auto& [key, value] : flags) {
      (void)value;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw ValidationError("unknown flag --" + key + " for subcommand '" + subcommand + "'");
    }
  }
};

Options parse_args(int argc, char** argv) {
  if (argc < 2) throw ValidationError(std::string("no subcommand given\n") + kUsage);
  Options opts;
  opts.subcommand = argv[1];
  for (int i = 2; i < argc; ++i) {
    std::string token = argv[i];
    if (token.rfind("--", 0) != 0)
      throw ValidationError("expected a --flag, got '" + token + "'");
    token = token.substr(2);
    const auto eq = token.find('=');
    if (eq != std::string::npos) {
      opts.flags[token.substr(0, eq)] = token.substr(eq + 1);
    } else {
      if (i + 1 >= argc) throw ValidationError("flag --" + token + " is missing its value");
      opts.flags[token] = argv[++i];
    }
  }
  return opts;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(what + ": expected comma-separated integers, got '" + text + "'");
    }
  }
  if (values.empty()) throw ValidationError(what + ": empty list");
  return values;
}

// ---------------------------------------------------------------------------
// Device resolution and manifests

struct ResolvedDevice {
  DeviceConfig config;
  std::string source;
};

/// --device beats the SCRPLAB_DEVICE environment variable beats the builtin.
ResolvedDevice resolve_device(const Options& opts, const char* builtin_name,
                              DeviceConfig (*builtin)()) {
  if (opts.has("device")) {
    const std::string path = opts.flags.at("device");
    return {load_device_config_file(path), path};
  }
  if (const char* env = std::getenv(kDeviceEnvVar); env != nullptr && *env != '\0') {
    return {load_device_config_file(env), std::string(env)};
  }
  return {builtin(), std::string("builtin:") + builtin_name};
}

struct RunContext {
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
  std::string subcommand;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;

  json make_manifest(const json& config) const {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return json{{"subcommand", subcommand}, {"tool_version", kToolVersion},
                {"seed", seed},             {"config", config},
                {"wall_time_seconds", elapsed}};
  }
};

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

void write_json_file(const std::string& path, json body, const json& manifest) {
  body["manifest"] = manifest;
  write_text_file(path, body.dump(2) + "\n");
}

std::string file_name_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

/// CSV files reference their manifest's JSON file in a leading comment so the
/// data rows stay byte-reproducible across runs.
void write_csv_file(const std::string& path, const std::string& manifest_file,
                    const std::string& table) {
  write_text_file(path, "# manifest: " + manifest_file + "\n" + table);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "' for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json device_snapshot(const ResolvedDevice& dev) {
  return json{{"source", dev.source}, {"device", json::parse(dev.config.to_json_text())}};
}

/// Runs fn(0..n-1) on a bounded pool; results must be written by index so the
/// outcome is independent of the thread count. The first exception wins.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<int> parity_triplet(const Options& opts, const std::string& flag,
                                const DeviceConfig& device) {
  if (opts.has(flag)) {
    const auto q = parse_int_list(opts.flags.at(flag), "--" + flag);
    if (q.size() != 3) throw ValidationError("--" + flag + " expects exactly three indices");
    return q;
  }
  if (device.has_role("c1") && device.has_role("t") && device.has_role("c2"))
    return {device.role("c1"), device.role("t"), device.role("c2")};
  return {0, 1, 2};
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_coherence_limit(const Options& opts, RunContext& ctx) {
  opts.check_allowed({"gate-length", "qubits", "out"});
  const ResolvedDevice dev = resolve_device(opts, "paper_device", paper_device);
  const double gate_length_ns = opts.get_double("gate-length", 704.0);
  if (gate_length_ns <= 0.0) throw ValidationError("--gate-length must be positive (ns)");

  std::vector<int> qubits;
  if (opts.has("qubits")) {
    qubits = parse_int_list(opts.flags.at("qubits"), "--qubits");
  } else if (dev.config.has_role("c1") && dev.config.has_role("t") && dev.config.has_role("c2")) {
    qubits = {dev.config.role("c1"), dev.config.role("t"), dev.config.role("c2")};
  } else {
    for (std::size_t q = 0; q < dev.config.transmons().size(); ++q) qubits.push_back(int(q));
  }
  std::vector<std::pair<double, double>> coherences;
  for (int q : qubits) {
    const TransmonParams& t = dev.config.transmon(q);
    coherences.emplace_back(t.t1, t.t2);
  }
  const double infidelity = coherence_limit(gate_length_ns * 1e-9, coherences);

  std::ostringstream line;
  line.precision(6);
  line << infidelity;
  std::cout << line.str() << "\n";

  if (opts.has("out")) {
    const json config = {{"gate_length_ns", gate_length_ns},
                         {"qubits", qubits},
                         {"device", device_snapshot(dev)}};
    write_json_file(opts.flags.at("out"),
                    json{{"gate_length_ns", gate_length_ns},
                         {"qubits", qubits},
                         {"infidelity", infidelity}},
                    ctx.make_manifest(config));
  }
  return 0;
}

int cmd_rates(const Options& opts, RunContext& ctx) {
  opts.check_allowed({"omega-c1-mhz", "omega-c2-mhz", "omega-t-mhz", "out"});
  const ResolvedDevice dev = resolve_device(opts, "paper_triplet", paper_triplet);
  const double w1 = mhz_to_rad(opts.get_double("omega-c1-mhz", 10.0));
  const double w2 = mhz_to_rad(opts.get_double("omega-c2-mhz", 8.0));
  const double wt = mhz_to_rad(opts.get_double("omega-t-mhz", 0.0));

  const EffectiveRates pert = perturbative_rates(dev.config, w1, w2, wt);
  const RateTable extracted = extract_rates_spectral(dev.config, w1, w2, wt);

  const std::vector<std::pair<std::string, double>> terms = {{"ZZI", pert.zzi},
                                                             {"IZZ", pert.izz},
                                                             {"ZXI", pert.zxi},
                                                             {"IXZ", pert.ixz},
                                                             {"IXI", pert.ixi}};
  std::ostringstream table;
  table.precision(9);
  table << "term,perturbative_Hz,extracted_Hz,rel_err\n";
  for (const auto& [label, pert_rate] : terms) {
    const double ext_rate = extracted.omega.count(label) ? extracted.omega.at(label) : 0.0;
    const double denom = std::abs(pert_rate) > 0.0 ? std::abs(pert_rate) : 1.0;
    table << label << "," << pert_rate / kTwoPi << "," << ext_rate / kTwoPi << ","
          << std::abs(ext_rate - pert_rate) / denom << "\n";
  }
  std::cout << table.str();

  if (opts.has("out")) {
    const std::string out = opts.flags.at("out");
    const json config = {{"omega_c1_rad_s", w1},
                         {"omega_c2_rad_s", w2},
                         {"omega_t_rad_s", wt},
                         {"off_block_residual", extracted.off_block_residual},
                         {"device", device_snapshot(dev)}};
    const std::string manifest_path = out + ".manifest.json";
    write_json_file(manifest_path, json::object(), ctx.make_manifest(config));
    write_csv_file(out, file_name_of(manifest_path), table.str());
  }
  return 0;
}

int cmd_calibrate(const Options& opts, RunContext& ctx) {
  opts.check_allowed({"triplet", "sweep-max", "half-ns", "sigma-ns", "omega1-mhz", "omega2-mhz",
                      "two-level", "fast", "repetitions", "shots", "out"});
  const bool two_level = opts.get_switch("two-level", false);
  const ResolvedDevice dev = two_level
                                 ? resolve_device(opts, "qubit_limit_triplet", qubit_limit_triplet)
                                 : resolve_device(opts, "paper_triplet", paper_triplet);
  const std::vector<int> triplet = parity_triplet(opts, "triplet", dev.config);
  const double sweep_max = mhz_to_rad(opts.get_double("sweep-max", 12.0));
  const double half = opts.get_double("half-ns", 184.9) * 1e-9;
  const double sigma = opts.get_double("sigma-ns", 4.0) * 1e-9;

  const ScrpAmplitudeSolve shipped = default_scrp_calibration();
  const double omega1 = opts.has("omega1-mhz") ? mhz_to_rad(opts.get_double("omega1-mhz", 0.0))
                                               : shipped.omega1;
  const double omega2 = opts.has("omega2-mhz") ? mhz_to_rad(opts.get_double("omega2-mhz", 0.0))
                                               : shipped.omega2;

  CalibrationOptions cal;
  cal.fast = opts.get_switch("fast", true);
  cal.repetitions = int(opts.get_int("repetitions", 6));
  cal.shots = int(opts.get_int("shots", 0));
  cal.seed = unsigned(ctx.seed);

  const DeviceConfig& device = dev.config;
  const auto builder = [&](double amplitude) {
    return build_scrp_schedule(device, triplet[0], triplet[2], triplet[1], Complex(omega1, 0.0),
                               Complex(omega2, 0.0), Complex(amplitude, 0.0), half, sigma);
  };
  const CalibrationResult result = calibrate_rotary_amplitude(device, builder, sweep_max, cal);

  json curve = json::array();
  for (const auto& [amplitude, cost] : result.cost_curve)
    curve.push_back({amplitude, cost});
  const json body = {{"best_amplitude", result.best_amplitude},
                     {"best_amplitude_mhz", result.best_amplitude / kTwoPi / 1e6},
                     {"cost_curve", curve}};
  const json config = {{"triplet", triplet},
                       {"sweep_max_rad_s", sweep_max},
                       {"half_duration_s", half},
                       {"rise_sigma_s", sigma},
                       {"omega1_rad_s", omega1},
                       {"omega2_rad_s", omega2},
                       {"fast", cal.fast},
                       {"repetitions", cal.repetitions},
                       {"shots", cal.shots},
                       {"device", device_snapshot(dev)}};

  std::ostringstream summary;
  summary.precision(6);
  summary << "best rotary amplitude: " << result.best_amplitude << " rad/s ("
          << result.best_amplitude / kTwoPi / 1e6 << " MHz) over " << result.cost_curve.size()
          << " points\n";
  if (opts.has("out")) {
    write_json_file(opts.flags.at("out"), body, ctx.make_manifest(config));
    std::cout << summary.str();
  } else {
    json full = body;
    full["manifest"] = ctx.make_manifest(config);
    std::cout << full.dump(2) << "\n";
  }
  return 0;
}

json rb_result_to_json(const RBResult& r) {
  json per_length = json::array();
  for (std::size_t i = 0; i < r.lengths.size(); ++i) {
    per_length.push_back({{"length", r.lengths[i]},
                          {"mean_survival", r.mean_survival[i]},
                          {"std_survival", r.std_survival[i]}});
  }
  return json{{"n_qubits", r.n_qubits},
              {"per_length", per_length},
              {"amplitude", r.amplitude},
              {"decay", r.decay},
              {"baseline", r.baseline},
              {"decay_stderr", r.decay_stderr},
              {"error_per_clifford", r.error_per_clifford},
              {"error_per_clifford_stderr", r.error_per_clifford_stderr}};
}

int cmd_irb(const Options& opts, RunContext& ctx) {
  opts.check_allowed(
      {"lengths", "samples", "shots", "interleave", "executor", "p", "line", "out-dir"});
  const ResolvedDevice dev = resolve_device(opts, "paper_triplet", paper_triplet);
  const std::vector<int> lengths =
      parse_int_list(opts.get("lengths", "2,3,4,5,7,9,12,17,25,38"), "--lengths");
  const int samples = int(opts.get_int("samples", 50));
  const int shots = int(opts.get_int("shots", 400));
  const std::string interleave_name =
      opts.get_choice("interleave", "none", {"none", "twocx", "scrp"});
  const std::string executor_name =
      opts.get_choice("executor", "ideal", {"ideal", "depolarizing", "damping"});
  const double p = opts.get_double("p", 0.01);
  const auto line_list = parse_int_list(opts.get("line", "0,1,2"), "--line");
  if (line_list.size() != 3) throw ValidationError("--line expects exactly three indices");
  const std::array<int, 3> line = {line_list[0], line_list[1], line_list[2]};
  const std::string out_dir = opts.get("out-dir", ".");
  if (samples <= 0) throw ValidationError("--samples must be positive");
  if (shots < 0) throw ValidationError("--shots must be >= 0");

  GateExecutor executor;
  if (executor_name == "ideal") {
    executor = ideal_executor();
  } else if (executor_name == "depolarizing") {
    if (p <= 0.0 || p >= 1.0) throw ValidationError("--p must lie in (0, 1)");
    executor = depolarizing_executor(p);
  } else {
    executor = damping_executor(dev.config);
  }

  std::optional<Circuit> interleave;
  if (interleave_name == "twocx") interleave = zparity_as_two_cx();
  if (interleave_name == "scrp") interleave = zparity_native();

  const auto reference_circuits =
      build_irb_circuits(lengths, samples, std::nullopt, line, ctx.seed);
  const RBResult reference = run_rb(reference_circuits, executor, shots, ctx.seed);

  std::optional<RBResult> interleaved;
  std::optional<EpgEstimate> epg;
  if (interleave) {
    const auto interleaved_circuits =
        build_irb_circuits(lengths, samples, interleave, line, ctx.seed);
    interleaved = run_rb(interleaved_circuits, executor, shots, ctx.seed + 1);
    epg = interleaved_epg(reference, *interleaved);
  }

  const json config = {{"lengths", lengths},
                       {"samples", samples},
                       {"shots", shots},
                       {"interleave", interleave_name},
                       {"executor", executor_name},
                       {"depolarizing_p", executor_name == "depolarizing" ? p : 0.0},
                       {"line", line_list},
                       {"device", device_snapshot(dev)}};
  const json manifest = ctx.make_manifest(config);

  json body = {{"reference", rb_result_to_json(reference)}};
  body["interleaved"] = interleaved ? rb_result_to_json(*interleaved) : json(nullptr);
  body["epg"] = epg ? json{{"value", epg->value}, {"uncertainty", epg->uncertainty}}
                    : json(nullptr);
  write_json_file(out_dir + "/irb.json", body, manifest);

  std::ostringstream table;
  table.precision(9);
  table << "stream,length,sample,survival\n";
  const auto emit = [&table](const char* stream, const RBResult& r) {
    for (std::size_t i = 0; i < r.lengths.size(); ++i)
      for (std::size_t s = 0; s < r.survivals[i].size(); ++s)
        table << stream << "," << r.lengths[i] << "," << s << "," << r.survivals[i][s] << "\n";
  };
  emit("reference", reference);
  if (interleaved) emit("interleaved", *interleaved);
  write_csv_file(out_dir + "/irb.csv", "irb.json", table.str());

  std::ostringstream summary;
  summary.precision(6);
  summary << "reference decay " << reference.decay << " +/- " << reference.decay_stderr
          << ", error per Clifford " << reference.error_per_clifford << " +/- "
          << reference.error_per_clifford_stderr << "\n";
  if (interleaved) {
    summary << "interleaved decay " << interleaved->decay << " +/- " << interleaved->decay_stderr
            << "\n";
    summary << "interleaved gate error " << epg->value << " +/- " << epg->uncertainty << "\n";
  }
  std::cout << summary.str();
  return 0;
}

int cmd_parity_exp(const Options& opts, RunContext& ctx) {
  opts.check_allowed(
      {"impl", "dd", "shots", "x-ns", "idle-z-rate", "readout-flip", "out-dir"});
  const ResolvedDevice dev = resolve_device(opts, "paper_device", paper_device);
  const std::string impl = opts.get_choice("impl", "scrp", {"twocx", "scrp"});
  const bool dd = opts.get_switch("dd", false);
  const long shots = long(opts.get_int("shots", 40000));
  const double x_ns = opts.get_double("x-ns", 35.6);
  const double idle_z_rate = opts.get_double("idle-z-rate", 0.0);
  const double readout_flip = opts.get_double("readout-flip", 0.0);
  const std::string out_dir = opts.get("out-dir", ".");
  if (shots < 0) throw ValidationError("--shots must be >= 0 (0 = exact probabilities)");

  const Circuit circuit = impl == "twocx" ? build_xparity_cnot() : build_xparity_parity();
  ScheduledCircuit sc = schedule_alap(circuit, default_parity_durations());
  if (dd) sc = insert_dd(sc, x_ns * 1e-9);

  NoiseModel noise;
  noise.damping = true;
  noise.idle_z_rate = idle_z_rate;
  noise.readout_flip = readout_flip;

  const std::vector<std::string> labels = parity_input_labels();
  std::vector<ParityOutcome> outcomes(labels.size());
  parallel_for(int(labels.size()), ctx.threads, [&](int i) {
    outcomes[i] =
        simulate_noisy(sc, dev.config, noise, shots, labels[i], ctx.seed + std::uint64_t(i));
  });
  const ParityErrorReport report = error_statistics(outcomes);

  const json config = {{"impl", impl},
                       {"dd", dd},
                       {"shots", shots},
                       {"x_duration_ns", x_ns},
                       {"idle_z_rate_rad_s", idle_z_rate},
                       {"readout_flip", readout_flip},
                       {"schedule_total_duration_s", sc.total_duration},
                       {"device", device_snapshot(dev)}};
  const json manifest = ctx.make_manifest(config);

  const std::string stem = "parity_" + impl + (dd ? "_dd" : "");
  std::ostringstream table;
  table.precision(9);
  table << "impl,dd,input,syndrome_error,data_error,d1_error,d2_error,d3_error,d4_error\n";
  for (const auto& outcome : outcomes) {
    table << impl << "," << (dd ? 1 : 0) << "," << outcome.input << ","
          << outcome.syndrome_error() << "," << outcome.data_error();
    for (int k = 0; k < 4; ++k) table << "," << outcome.data_qubit_error(k);
    table << "\n";
  }
  write_csv_file(out_dir + "/" + stem + ".csv", stem + ".json", table.str());

  json raw = json::array();
  for (const auto& outcome : outcomes) {
    json counts = json::object();
    for (const auto& [key, weight] : outcome.weights)
      counts[std::to_string(key.first) + ":" + key.second] = weight;
    raw.push_back({{"input", outcome.input}, {"shots", outcome.shots}, {"counts", counts}});
  }
  const json body = {{"impl", impl},
                     {"dd", dd},
                     {"schedule_total_duration_s", sc.total_duration},
                     {"syndrome_error", report.syndrome_error},
                     {"syndrome_error_std", report.syndrome_error_std},
                     {"data_error", report.data_error},
                     {"data_error_std", report.data_error_std},
                     {"data_qubit_error", report.data_qubit_error},
                     {"outcomes", raw}};
  write_json_file(out_dir + "/" + stem + ".json", body, manifest);

  std::ostringstream summary;
  summary.precision(6);
  summary << impl << (dd ? " with" : " without") << " decoupling: syndrome error "
          << report.syndrome_error << " +/- " << report.syndrome_error_std << ", data error "
          << report.data_error << " +/- " << report.data_error_std << " (schedule "
          << sc.total_duration * 1e9 << " ns)\n";
  std::cout << summary.str();
  return 0;
}

int cmd_optimize(const Options& opts, RunContext& ctx) {
  opts.check_allowed({"in", "out", "report"});
  const std::string in_path = opts.require("in");
  const Circuit input = circuit_from_json(read_text_file(in_path));
  const Circuit output = fuse_two_cx(rewrite_swap_chain(input));

  std::map<std::string, double> durations = default_gate_durations();
  durations["Z"] = 0.0;              // virtual, like RZ
  durations["SWAP"] = 3 * 3.52e-7;   // three CX back to back
  const RewriteReport report = make_rewrite_report(input, output, durations);

  const json config = {{"in", in_path},
                       {"out", opts.get("out", "")},
                       {"report", opts.get("report", "")},
                       {"durations", durations}};
  const json manifest = ctx.make_manifest(config);

  json circuit_json = json::parse(circuit_to_json(output));
  if (opts.has("out")) {
    json with_manifest = circuit_json;
    with_manifest["manifest"] = manifest;
    write_text_file(opts.flags.at("out"), with_manifest.dump(2) + "\n");
  } else {
    std::cout << circuit_json.dump(2) << "\n";
  }

  if (opts.has("report")) {
    const json body = {{"counts_before", report.counts_before},
                       {"counts_after", report.counts_after},
                       {"duration_before_s", report.duration_before},
                       {"duration_after_s", report.duration_after},
                       {"unit_depth_before", report.unit_depth_before},
                       {"unit_depth_after", report.unit_depth_after},
                       {"verified", report.verified}};
    write_json_file(opts.flags.at("report"), body, manifest);
  }

  std::ostringstream summary;
  summary << "rewrote " << input.gates.size() << " gates to " << output.gates.size()
          << (report.verified ? " (verified equivalent)" : " (too wide to verify densely)")
          << "\n";
  std::cerr << summary.str();
  return 0;
}

int cmd_dump_schedule(const Options& opts, RunContext& ctx) {
  opts.check_allowed({"gate", "dressing", "rotary-mhz", "half-ns", "sigma-ns", "triplet", "out"});
  const ResolvedDevice dev = resolve_device(opts, "paper_triplet", paper_triplet);
  const std::string gate = opts.get_choice("gate", "scrp", {"scrp", "ecr"});
  const bool dressing = opts.get_switch("dressing", false);
  const double rotary = mhz_to_rad(opts.get_double("rotary-mhz", 0.0));
  const double half = opts.get_double("half-ns", 184.9) * 1e-9;
  const double sigma = opts.get_double("sigma-ns", 4.0) * 1e-9;
  const std::vector<int> triplet = parity_triplet(opts, "triplet", dev.config);

  const ScrpAmplitudeSolve shipped = default_scrp_calibration();
  Schedule schedule;
  if (gate == "scrp") {
    schedule = build_scrp_schedule(dev.config, triplet[0], triplet[2], triplet[1],
                                   Complex(shipped.omega1, 0.0), Complex(shipped.omega2, 0.0),
                                   Complex(rotary, 0.0), half, sigma, dressing);
  } else {
    schedule = build_ecr_schedule(dev.config, triplet[0], triplet[1], Complex(shipped.omega1, 0.0),
                                  Complex(rotary, 0.0), half, sigma);
  }

  const json config = {{"gate", gate},
                       {"dressing", dressing},
                       {"rotary_rad_s", rotary},
                       {"half_duration_s", half},
                       {"rise_sigma_s", sigma},
                       {"triplet", triplet},
                       {"device", device_snapshot(dev)}};
  json body = {{"schedule", json::parse(schedule.to_json_text())}};
  body["manifest"] = ctx.make_manifest(config);
  if (opts.has("out")) {
    write_text_file(opts.flags.at("out"), body.dump(2) + "\n");
    std::cout << "schedule with " << schedule.instructions().size() << " instructions, "
              << schedule.total_duration() * 1e9 << " ns\n";
  } else {
    std::cout << body.dump(2) << "\n";
  }
  return 0;
}

int run(int argc, char** argv) {
  Options opts = parse_args(argc, argv);
  RunContext ctx;
  ctx.subcommand = opts.subcommand;
  ctx.seed = std::uint64_t(opts.get_int("seed", (long long)kDefaultSeed));
  const unsigned hw = std::thread::hardware_concurrency();
  ctx.threads = int(opts.get_int("threads", hw == 0 ? 1 : (long long)hw));
  if (ctx.threads < 1) throw ValidationError("--threads must be >= 1");

  if (opts.subcommand == "coherence-limit") return cmd_coherence_limit(opts, ctx);
  if (opts.subcommand == "rates") return cmd_rates(opts, ctx);
  if (opts.subcommand == "calibrate") return cmd_calibrate(opts, ctx);
  if (opts.subcommand == "irb") return cmd_irb(opts, ctx);
  if (opts.subcommand == "parity-exp") return cmd_parity_exp(opts, ctx);
  if (opts.subcommand == "optimize") return cmd_optimize(opts, ctx);
  if (opts.subcommand == "dump-schedule") return cmd_dump_schedule(opts, ctx);
  throw ValidationError("unknown subcommand '" + opts.subcommand + "'\n" + kUsage);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
