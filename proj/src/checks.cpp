/*
 * Copyright 2026 The setspace authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "setspace/checks.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace setspace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// In_t and Out_t for every instance, from the invoke records and decision
// events. Per-pid invoke counters recover the instance of each Invoke step.
void collect_io(const Trace& trace, std::map<int, std::set<Val>>& inputs,
                std::map<int, std::set<Val>>& outputs) {
  std::map<int, int> invoked;
  for (const Step& s : trace.steps) {
    if (s.primitive == Primitive::Invoke) {
      const int t = ++invoked[s.pid];
      inputs[t].insert(std::get<Val>(*s.value_written));
    }
  }
  for (const DecisionEvent& e : trace.decisions)
    outputs[e.instance].insert(e.value);
}

PropertyReport base_report(const Trace& trace, std::string name) {
  PropertyReport r;
  r.property = std::move(name);
  collect_io(trace, r.inputs_per_instance, r.outputs_per_instance);
  return r;
}

void fail(PropertyReport& r, std::size_t step, std::string why) {
  if (r.verdict == Verdict::Fail) return;  // keep the earliest violation
  r.verdict = Verdict::Fail;
  r.fail_step = step;
  r.explanation = std::move(why);
}

}  // namespace

PropertyReport check_validity(const Trace& trace) {
  PropertyReport r = base_report(trace, "validity");
  for (const DecisionEvent& e : trace.decisions) {
    const auto it = r.inputs_per_instance.find(e.instance);
    if (it == r.inputs_per_instance.end() || !it->second.count(e.value)) {
      std::ostringstream why;
      why << "pid " << e.pid << " output " << e.value << " for instance "
          << e.instance << ", which nobody proposed";
      fail(r, e.step_index, why.str());
      break;
    }
  }
  return r;
}

PropertyReport check_k_agreement(const Trace& trace, int k) {
  PropertyReport r = base_report(trace, "k_agreement");
  std::map<int, std::set<Val>> seen;
  for (const DecisionEvent& e : trace.decisions) {
    std::set<Val>& out = seen[e.instance];
    out.insert(e.value);
    if (static_cast<int>(out.size()) > k) {
      std::ostringstream why;
      why << "instance " << e.instance << " reached " << out.size()
          << " distinct outputs, bound is " << k;
      fail(r, e.step_index, why.str());
      break;
    }
  }
  return r;
}

PropertyReport check_m_of_termination(const Trace& trace,
                                      const Schedule& schedule) {
  if (schedule.kind != Schedule::Kind::EventuallyMBounded)
    throw ConfigError("termination check needs an eventually-m-bounded run");
  PropertyReport r = base_report(trace, "m_of_termination");
  if (trace.truncated) {
    r.verdict = Verdict::Inconclusive;
    r.explanation = "trace hit the step cap before the survivors finished";
    return r;
  }
  std::map<int, int> completed;
  for (const DecisionEvent& e : trace.decisions) ++completed[e.pid];
  for (int pid : schedule.survivors) {
    if (completed[pid] != trace.params.s_instances) {
      std::ostringstream why;
      why << "survivor " << pid << " completed " << completed[pid] << " of "
          << trace.params.s_instances << " operations";
      fail(r, trace.steps.empty() ? 0 : trace.steps.back().step_index,
           why.str());
    }
  }
  return r;
}

PropertyReport check_adoption(const Trace& trace) {
  if (!protocol_is_repeated(trace.params.protocol))
    throw ConfigError("adoption check applies to repeated protocols");
  PropertyReport r = base_report(trace, "adoption");
  std::map<int, std::set<Val>> direct;  // t-deciding outputs per instance
  for (const DecisionEvent& e : trace.decisions)
    if (e.kind == DecisionKind::TDeciding) direct[e.instance].insert(e.value);
  for (const DecisionEvent& e : trace.decisions) {
    if (e.kind == DecisionKind::TDeciding) continue;
    if (!direct[e.instance].count(e.value)) {
      std::ostringstream why;
      why << "pid " << e.pid << " adopted " << e.value << " for instance "
          << e.instance << " but no process t-decided that value";
      fail(r, e.step_index, why.str());
      break;
    }
  }
  return r;
}

namespace {

// Applies a recorded update/collect-observed write to a mirrored component
// array; monitors replay memory from the step log instead of the protocol.
struct SnapshotMirror {
  std::vector<RegisterValue> comps;

  explicit SnapshotMirror(const Trace& trace) {
    const auto it = trace.initial.mem.snapshots.find("A");
    if (it == trace.initial.mem.snapshots.end())
      throw ConfigError("trace has no snapshot object");
    comps = it->second.components;
  }

  // Returns the overwritten value when the step is an update of A.
  std::optional<RegisterValue> apply(const Step& s) {
    if (s.primitive != Primitive::Update || s.object != "A")
      return std::nullopt;
    RegisterValue old = comps.at(static_cast<std::size_t>(s.component));
    comps[static_cast<std::size_t>(s.component)] = *s.value_written;
    return old;
  }
};

}  // namespace

PropertyReport monitor_lemma2(const Trace& trace) {
  if (trace.params.protocol != Protocol::Fig2)
    throw ConfigError("identifier-coherence monitor expects FIG2 traces");
  PropertyReport r = base_report(trace, "same_id_same_value");
  SnapshotMirror mirror(trace);
  // Per identifier, the distinct values currently present and their counts.
  std::map<int, std::map<Val, int>> live;
  const auto remove = [&](const RegisterValue& v) {
    const auto* p = std::get_if<IdPair>(&v);
    if (p == nullptr) return;
    auto& vals = live[p->id];
    if (--vals[p->value] == 0) vals.erase(p->value);
    if (vals.empty()) live.erase(p->id);
  };
  for (const Step& s : trace.steps) {
    auto old = mirror.apply(s);
    if (!old) continue;
    remove(*old);
    const IdPair& w = std::get<IdPair>(*s.value_written);
    ++live[w.id][w.value];
    if (live[w.id].size() > 1) {
      std::ostringstream why;
      why << "identifier " << w.id << " holds " << live[w.id].size()
          << " distinct values at once";
      fail(r, s.step_index, why.str());
      break;
    }
  }
  return r;
}

PropertyReport monitor_lemma6(const Trace& trace) {
  if (trace.params.protocol != Protocol::Fig3)
    throw ConfigError("per-instance coherence monitor expects FIG3 traces");
  PropertyReport r = base_report(trace, "same_id_same_tuple");
  SnapshotMirror mirror(trace);
  // Per (identifier, instance), the distinct tuples currently present.
  std::map<std::pair<int, int>, std::map<RegisterValue, int>> live;
  const auto remove = [&](const RegisterValue& v) {
    const auto* p = std::get_if<RepTuple>(&v);
    if (p == nullptr) return;
    const std::pair<int, int> key{p->id, p->instance};
    auto& tuples = live[key];
    if (--tuples[v] == 0) tuples.erase(v);
    if (tuples.empty()) live.erase(key);
  };
  for (const Step& s : trace.steps) {
    auto old = mirror.apply(s);
    if (!old) continue;
    remove(*old);
    const RepTuple& w = std::get<RepTuple>(*s.value_written);
    const std::pair<int, int> key{w.id, w.instance};
    ++live[key][*s.value_written];
    if (live[key].size() > 1) {
      std::ostringstream why;
      why << "identifier " << w.id << " holds " << live[key].size()
          << " distinct tuples for instance " << w.instance;
      fail(r, s.step_index, why.str());
      break;
    }
  }
  return r;
}

PropertyReport monitor_lemma4(const Trace& trace,
                              const ProtocolParams& params) {
  if (params.protocol != Protocol::Fig2)
    throw ConfigError("pivot-scan monitor expects FIG2 traces");
  PropertyReport r = base_report(trace, "pivot_scan_confinement");
  const int need = params.n - params.l_threshold() + 1;  // k - m + 1
  SnapshotMirror mirror(trace);
  int deciders = 0;
  bool pivoted = false;
  std::set<Val> v_set;
  // Copies per pair, only consulted after the pivot. The invariant is
  // per-pair: a pair whose value is outside the pivot's value set may occupy
  // at most one location (distinct ids may still share such a value).
  std::map<std::pair<Val, int>, int> pair_comps;
  for (const Step& s : trace.steps) {
    if (pivoted) {
      auto old = mirror.apply(s);
      if (old) {
        if (const auto* p = std::get_if<IdPair>(&*old))
          --pair_comps[{p->value, p->id}];
        const IdPair& w = std::get<IdPair>(*s.value_written);
        ++pair_comps[{w.value, w.id}];
        if (!v_set.count(w.value) && pair_comps[{w.value, w.id}] >= 2) {
          std::ostringstream why;
          why << "pair (" << w.value << "," << w.id
              << ") outside the pivot scan occupies two components";
          fail(r, s.step_index, why.str());
          break;
        }
      }
      for (const DecisionEvent& e : s.events) {
        if (!v_set.count(e.value)) {
          std::ostringstream why;
          why << "pid " << e.pid << " decided " << e.value
              << " after the pivot scan, outside its value set";
          fail(r, s.step_index, why.str());
        }
      }
      if (r.verdict == Verdict::Fail) break;
      continue;
    }
    mirror.apply(s);
    if (s.events.empty()) continue;
    deciders += static_cast<int>(s.events.size());
    if (deciders < need) continue;
    // This scan is the pivot; the lemma confines later writes and outputs
    // to its value set.
    pivoted = true;
    if (!s.scan_result) {
      r.verdict = Verdict::Inconclusive;
      r.explanation = "pivot decision carries no scan";
      return r;
    }
    for (const RegisterValue& v : *s.scan_result)
      v_set.insert(std::get<IdPair>(v).value);
    if (static_cast<int>(v_set.size()) > params.m) {
      std::ostringstream why;
      why << "pivot scan saw " << v_set.size() << " values, bound is "
          << params.m;
      fail(r, s.step_index, why.str());
      return r;
    }
    for (const RegisterValue& v : mirror.comps)
      if (const auto* p = std::get_if<IdPair>(&v))
        ++pair_comps[{p->value, p->id}];
  }
  if (!pivoted && r.verdict == Verdict::Pass) {
    r.verdict = Verdict::Inconclusive;
    std::ostringstream why;
    why << "only " << deciders << " of the required " << need
        << " deciders appeared";
    r.explanation = why.str();
  }
  return r;
}

PropertyReport replay(const Trace& trace) {
  PropertyReport r = base_report(trace, "replay");
  Configuration config = trace.initial;
  for (const Step& recorded : trace.steps) {
    Step again = apply_activation(trace.params, config,
                                  Activation{recorded.pid, recorded.thread},
                                  recorded.step_index);
    if (again != recorded) {
      std::ostringstream why;
      why << "step " << recorded.step_index << " diverged on replay ("
          << primitive_name(recorded.primitive) << " vs "
          << primitive_name(again.primitive) << ")";
      fail(r, recorded.step_index, why.str());
      break;
    }
  }
  return r;
}

std::set<Cell> touched_cells(const Trace& trace) {
  std::set<Cell> cells;
  for (const Step& s : trace.steps) {
    switch (s.primitive) {
      case Primitive::Update:
      case Primitive::CollectRead:
        cells.insert(Cell{s.object, s.component});
        break;
      case Primitive::Scan: {
        const auto& obj = trace.initial.mem.snapshots.at(s.object);
        for (std::size_t c = 0; c < obj.components.size(); ++c)
          cells.insert(Cell{s.object, static_cast<int>(c)});
        break;
      }
      case Primitive::RegisterRead:
      case Primitive::RegisterWrite:
        cells.insert(Cell{s.object, Cell::kPlainRegister});
        break;
      case Primitive::Invoke:
      case Primitive::Noop:
        break;
    }
  }
  return cells;
}

SearchResult bounded_search(
    const ProtocolParams& params, const Configuration& start,
    const std::vector<int>& group, const std::vector<Thread>& threads,
    const std::function<bool(const Configuration&)>& goal,
    std::size_t depth_cap) {
  if (group.empty()) throw ConfigError("search group must be non-empty");
  for (int pid : group)
    if (pid < 0 || pid >= static_cast<int>(start.machines.size()))
      throw ConfigError("search group pid out of range");

  struct Node {
    Configuration config;
    int parent;
    Activation via;
    std::size_t depth;
  };
  SearchResult result;
  std::vector<Node> nodes;
  std::unordered_set<Configuration, ConfigurationHash> visited;
  std::deque<int> frontier;

  const auto unwind = [&](int idx) {
    std::vector<Activation> path;
    for (; nodes[idx].parent >= 0; idx = nodes[idx].parent)
      path.push_back(nodes[idx].via);
    std::reverse(path.begin(), path.end());
    return path;
  };

  nodes.push_back(Node{start, -1, Activation{}, 0});
  visited.insert(start);
  frontier.push_back(0);
  bool truncated = false;
  while (!frontier.empty()) {
    const int idx = frontier.front();
    frontier.pop_front();
    ++result.explored;
    if (goal(nodes[idx].config)) {
      result.found = true;
      result.activations = unwind(idx);
      return result;
    }
    for (int pid : group) {
      const ProcessMachine& machine = nodes[idx].config.machines[pid];
      if (machine.status == Status::Halted) continue;
      for (Thread thread : threads) {
        if (nodes[idx].depth >= depth_cap) {
          truncated = true;
          continue;
        }
        Configuration next =
            step_once(params, nodes[idx].config, pid, thread);
        if (!visited.insert(next).second) continue;
        nodes.push_back(Node{std::move(next), idx, Activation{pid, thread},
                             nodes[idx].depth + 1});
        frontier.push_back(static_cast<int>(nodes.size()) - 1);
      }
    }
  }
  result.exhausted = !truncated;
  return result;
}

Lemma1Outcome lemma1_oracle(const ProtocolParams& params, std::vector<int> Q,
                            std::vector<Val> V, std::size_t depth_cap) {
  params.validate();
  std::sort(Q.begin(), Q.end());
  std::sort(V.begin(), V.end());
  if (Q.empty() || V.empty())
    throw ConfigError("oracle needs non-empty Q and V");
  if (std::adjacent_find(Q.begin(), Q.end()) != Q.end())
    throw ConfigError("oracle pids must be distinct");
  if (std::adjacent_find(V.begin(), V.end()) != V.end())
    throw ConfigError("oracle values must be distinct");
  if (V.size() > Q.size())
    throw ConfigError("oracle needs |V| <= |Q|");
  if (static_cast<int>(V.size()) > params.m)
    throw ConfigError("oracle value set must have at most m values");
  for (int pid : Q)
    if (pid < 0 || pid >= params.n) throw ConfigError("oracle pid out of range");
  for (Val v : V)
    if (v < 0 || v >= params.domain_size)
      throw ConfigError("oracle value outside the input domain");

  std::vector<std::vector<Val>> inputs(
      params.n, std::vector<Val>(params.s_instances, V.front()));
  for (std::size_t i = 0; i < Q.size(); ++i)
    inputs[Q[i]].assign(params.s_instances, V[i % V.size()]);

  const Configuration start = initial_configuration(params, inputs);
  const auto goal = [&](const Configuration& c) {
    return std::all_of(V.begin(), V.end(), [&](Val v) {
      return std::any_of(Q.begin(), Q.end(), [&](int pid) {
        const auto& out = c.machines[pid].outputs;
        return !out.empty() && out.front() == v;
      });
    });
  };
  SearchResult found =
      bounded_search(params, start, Q, {Thread::T1}, goal, depth_cap);
  Lemma1Outcome outcome;
  outcome.explored = found.explored;
  if (!found.found) return outcome;
  outcome.found = true;
  outcome.witness = run_from(params, start, found.activations);
  return outcome;
}

}  // namespace setspace
