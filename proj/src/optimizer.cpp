// SPDX-License-Identifier: Apache-2.0

#include "scrplab/optimizer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <json.hpp>

#include "scrplab/qec_experiments.hpp"

namespace scrplab {

namespace {

using nlohmann::json;

Gate make_h(int q) { return Gate{"H", {q}, 0.0, 0.0}; }

/// Sub-circuit of `gates` with wires renumbered to 0..k−1; every gate must
/// act within `wires`.
Circuit on_subset(const std::vector<Gate>& gates, const std::vector<int>& wires) {
  std::map<int, int> remap;
  for (std::size_t i = 0; i < wires.size(); ++i) remap[wires[i]] = static_cast<int>(i);
  Circuit sub;
  sub.n_qubits = static_cast<int>(wires.size());
  for (const Gate& g : gates) {
    Gate h = g;
    for (int& q : h.qubits) q = remap.at(q);
    sub.gates.push_back(std::move(h));
  }
  return sub;
}

/// Dense equivalence check of a local replacement on exactly the wires the
/// gates touch. Replacements are small by construction, so this stays cheap.
void verify_replacement(const std::vector<Gate>& before, const std::vector<Gate>& after) {
  std::set<int> touched;
  for (const Gate& g : before) touched.insert(g.qubits.begin(), g.qubits.end());
  for (const Gate& g : after) touched.insert(g.qubits.begin(), g.qubits.end());
  const std::vector<int> wires(touched.begin(), touched.end());
  const EquivalenceResult r =
      verify_equivalence(on_subset(before, wires), on_subset(after, wires));
  if (!r.equivalent) {
    throw NumericalError("rewrite produced a non-equivalent local replacement");
  }
}

void append_chain_rewrite(std::vector<Gate>& out, const std::vector<int>& path, int n_qubits) {
  const int n_swaps = static_cast<int>(path.size()) - 1;
  std::vector<Gate> original, expanded;
  for (int k = 1; k <= n_swaps; ++k) {
    const int a = path[static_cast<std::size_t>(k - 1)];
    const int b = path[static_cast<std::size_t>(k)];
    original.push_back(Gate{"SWAP", {a, b}, 0.0, 0.0});
    // Alternate the three-CX orientation so each chain boundary exposes a
    // common-target pair (odd boundaries) or a common-control pair (even
    // boundaries) for the fusion pass.
    const int c = (k % 2 == 1) ? a : b;
    const int t = (k % 2 == 1) ? b : a;
    std::vector<Gate> triple = {Gate{"CX", {c, t}, 0.0, 0.0}, Gate{"CX", {t, c}, 0.0, 0.0},
                                Gate{"CX", {c, t}, 0.0, 0.0}};
    verify_replacement({original.back()}, triple);
    expanded.insert(expanded.end(), triple.begin(), triple.end());
  }

  Circuit seg;
  seg.n_qubits = n_qubits;
  seg.gates = std::move(expanded);
  if (n_swaps >= 2) seg = fuse_two_cx(seg);  // fusions verify themselves
  if (path.size() <= 12) verify_replacement(original, seg.gates);
  out.insert(out.end(), seg.gates.begin(), seg.gates.end());
}

}  // namespace

Circuit fuse_two_cx(const Circuit& c) {
  Circuit out = c;
  std::vector<Gate>& gs = out.gates;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (gs[i].name != "CX") continue;
    if (gs[i].qubits.size() != 2 || gs[i].qubits[0] == gs[i].qubits[1]) {
      throw ValidationError("CX takes two distinct qubits");
    }
    const int ctrl = gs[i].qubits[0], tgt = gs[i].qubits[1];
    std::set<int> dirty;
    for (std::size_t j = i + 1; j < gs.size(); ++j) {
      const Gate g = gs[j];
      const bool target_alive = dirty.count(tgt) == 0;
      const bool control_alive = dirty.count(ctrl) == 0;
      if (!target_alive && !control_alive) break;
      if (g.name == "CX" && g.qubits.size() == 2) {
        const int c2 = g.qubits[0], t2 = g.qubits[1];
        if (target_alive && t2 == tgt && c2 != ctrl && dirty.count(c2) == 0) {
          // Common target: the pair is one ZPARITY outright. Interposed
          // gates stay put after it; they are clean on the partner's wires,
          // so they commute across the erased second CX.
          const Gate zp{"ZPARITY", {ctrl, tgt, c2}, 0.0, 0.0};
          verify_replacement({gs[i], g}, {zp});
          gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(j));
          gs[i] = zp;
          break;
        }
        if (control_alive && c2 == ctrl && t2 != tgt && dirty.count(t2) == 0) {
          // Common control: conjugating all three wires by Hadamards turns
          // the pair into a common-target pair.
          const std::vector<Gate> block = {make_h(ctrl),
                                           make_h(tgt),
                                           make_h(t2),
                                           Gate{"ZPARITY", {tgt, ctrl, t2}, 0.0, 0.0},
                                           make_h(ctrl),
                                           make_h(tgt),
                                           make_h(t2)};
          verify_replacement({gs[i], g}, block);
          gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(j));
          gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
          gs.insert(gs.begin() + static_cast<std::ptrdiff_t>(i), block.begin(), block.end());
          break;
        }
      }
      if (g.qubits.empty()) break;  // a BARRIER fences rewrites
      for (int q : g.qubits) dirty.insert(q);
    }
  }
  return out;
}

Circuit rewrite_swap_chain(const Circuit& c) {
  Circuit out;
  out.n_qubits = c.n_qubits;
  const std::vector<Gate>& gs = c.gates;
  std::size_t i = 0;
  while (i < gs.size()) {
    if (gs[i].name != "SWAP") {
      out.gates.push_back(gs[i]);
      ++i;
      continue;
    }
    if (gs[i].qubits.size() != 2 || gs[i].qubits[0] == gs[i].qubits[1]) {
      throw ValidationError("SWAP takes two distinct qubits");
    }
    std::vector<int> path = {gs[i].qubits[0], gs[i].qubits[1]};
    std::size_t j = i + 1;
    while (j < gs.size() && gs[j].name == "SWAP" && gs[j].qubits.size() == 2) {
      const int u = gs[j].qubits[0], v = gs[j].qubits[1];
      int fresh = -1;
      if (u == path.back()) {
        fresh = v;
      } else if (v == path.back()) {
        fresh = u;
      } else if (path.size() == 2 && u == path.front()) {
        // The opening SWAP reads the same reversed, so the head can link.
        std::reverse(path.begin(), path.end());
        fresh = v;
      } else if (path.size() == 2 && v == path.front()) {
        std::reverse(path.begin(), path.end());
        fresh = u;
      }
      if (fresh < 0 || std::find(path.begin(), path.end(), fresh) != path.end()) break;
      path.push_back(fresh);
      ++j;
    }
    append_chain_rewrite(out.gates, path, c.n_qubits);
    i = j;
  }
  return out;
}

EquivalenceResult verify_equivalence(const Circuit& a, const Circuit& b) {
  if (a.n_qubits != b.n_qubits) {
    throw ValidationError("equivalence check needs circuits with the same qubit count");
  }
  if (a.n_qubits < 1 || a.n_qubits > 12) {
    throw ValidationError("equivalence check supports 1 to 12 qubits");
  }
  const Matrix ua = circuit_unitary(a);
  const Matrix ub = circuit_unitary(b);
  const long dim = ua.rows();
  const Complex tr = (ua.adjoint() * ub).trace();

  EquivalenceResult r;
  r.trace_defect = std::abs(static_cast<double>(dim) - std::abs(tr));
  if (r.trace_defect <= 1e-9) {
    r.equivalent = true;
    return r;
  }
  const Complex phase = (std::abs(tr) > 0.0) ? tr / std::abs(tr) : Complex(1.0, 0.0);
  for (long k = 0; k < dim; ++k) {
    const double d = (ua.col(k) - phase * ub.col(k)).norm();
    if (d > r.discrepancy) {
      r.discrepancy = d;
      r.counterexample_index = k;
    }
  }
  std::string ket(static_cast<std::size_t>(a.n_qubits), '0');
  for (int q = 0; q < a.n_qubits; ++q) {
    if ((r.counterexample_index >> q) & 1) {
      ket[static_cast<std::size_t>(a.n_qubits - 1 - q)] = '1';
    }
  }
  r.counterexample_ket = std::move(ket);
  return r;
}

DepthReport depth_report(const Circuit& c, const std::map<std::string, double>& durations) {
  DepthReport r;
  r.total_duration = schedule_alap(c, durations).total_duration;

  Circuit unit = c;
  std::map<std::string, double> unit_table;
  for (Gate& g : unit.gates) {
    if (g.name == "DELAY") {
      g.duration = 0.0;
      continue;
    }
    unit_table[gate_instance_key(g)] = g.qubits.size() >= 2 ? 1.0 : 0.0;
  }
  r.unit_depth = schedule_alap(unit, unit_table).total_duration;
  return r;
}

std::map<std::string, int> gate_counts(const Circuit& c) {
  std::map<std::string, int> counts;
  for (const Gate& g : c.gates) ++counts[g.name];
  return counts;
}

RewriteReport make_rewrite_report(const Circuit& input, const Circuit& output,
                                  const std::map<std::string, double>& durations) {
  RewriteReport rep;
  rep.input = input;
  rep.output = output;
  rep.counts_before = gate_counts(input);
  rep.counts_after = gate_counts(output);
  const DepthReport before = depth_report(input, durations);
  const DepthReport after = depth_report(output, durations);
  rep.duration_before = before.total_duration;
  rep.duration_after = after.total_duration;
  rep.unit_depth_before = before.unit_depth;
  rep.unit_depth_after = after.unit_depth;
  if (input.n_qubits == output.n_qubits && input.n_qubits >= 1 && input.n_qubits <= 12) {
    rep.verified = verify_equivalence(input, output).equivalent;
  }
  return rep;
}

Circuit circuit_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("circuit JSON parse error: ") + e.what());
  }
  try {
    Circuit c;
    c.n_qubits = j.at("n_qubits").get<int>();
    if (c.n_qubits < 1) throw ValidationError("circuit must declare at least one qubit");
    for (const json& jg : j.at("gates")) {
      Gate g;
      g.name = jg.at("name").get<std::string>();
      if (g.name.empty()) throw ValidationError("gate name must be non-empty");
      if (jg.contains("qubits")) {
        for (const json& q : jg.at("qubits")) g.qubits.push_back(q.get<int>());
      }
      g.param = jg.value("param", 0.0);
      g.duration = jg.value("duration", 0.0);
      for (int q : g.qubits) {
        if (q < 0 || q >= c.n_qubits) throw ValidationError("gate qubit out of range");
      }
      c.gates.push_back(std::move(g));
    }
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("circuit JSON schema error: ") + e.what());
  }
}

std::string circuit_to_json(const Circuit& c) {
  json j;
  j["n_qubits"] = c.n_qubits;
  j["gates"] = json::array();
  for (const Gate& g : c.gates) {
    json jg;
    jg["name"] = g.name;
    jg["qubits"] = g.qubits;
    jg["param"] = g.param;
    jg["duration"] = g.duration;
    j["gates"].push_back(std::move(jg));
  }
  return j.dump(2);
}

}  // namespace scrplab
