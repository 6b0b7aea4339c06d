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

#include "setspace/covering.hpp"

#include <algorithm>
#include <sstream>

namespace setspace {

namespace {

std::vector<Thread> threads_for(const ProtocolParams& params) {
  if (params.protocol == Protocol::Fig4)
    return {Thread::T1, Thread::T2};
  return {Thread::T1};
}

std::optional<Cell> step_write_cell(const Step& s) {
  switch (s.primitive) {
    case Primitive::Update:
      return Cell{s.object, s.component};
    case Primitive::RegisterWrite:
      return Cell{s.object, Cell::kPlainRegister};
    default:
      return std::nullopt;
  }
}

bool contains(const std::vector<Cell>& cells, const Cell& c) {
  return std::find(cells.begin(), cells.end(), c) != cells.end();
}

bool contains(const std::vector<int>& pids, int pid) {
  return std::find(pids.begin(), pids.end(), pid) != pids.end();
}

// Lowest group member poised to write outside A, if any.
std::optional<std::pair<int, Cell>> escape_at(const Configuration& config,
                                              const std::vector<int>& Q,
                                              const std::vector<Cell>& A) {
  for (int pid : Q) {
    auto cell = poised_write_cell(config.machines[pid]);
    if (cell && !contains(A, *cell)) return std::make_pair(pid, *cell);
  }
  return std::nullopt;
}

// Step records compared up to scheduling artifacts (index, pid, event pid).
bool same_observation(const Step& a, const Step& b) {
  if (a.primitive != b.primitive || a.object != b.object ||
      a.component != b.component || a.value_written != b.value_written ||
      a.value_read != b.value_read || a.scan_result != b.scan_result)
    return false;
  if (a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    if (a.events[i].instance != b.events[i].instance ||
        a.events[i].value != b.events[i].value ||
        a.events[i].kind != b.events[i].kind)
      return false;
  }
  return true;
}

int max_instance(const Configuration& config) {
  int s = 0;
  for (const ProcessMachine& m : config.machines)
    s = std::max(s, m.instance);
  return s;
}

}  // namespace

FragmentResult fragment_search(const ProtocolParams& params,
                               const Configuration& D,
                               const std::vector<int>& Q,
                               const std::vector<Cell>& A,
                               std::size_t depth_cap) {
  const auto goal = [&](const Configuration& c) {
    return escape_at(c, Q, A).has_value();
  };
  SearchResult sr =
      bounded_search(params, D, Q, threads_for(params), goal, depth_cap);
  FragmentResult out;
  out.explored = sr.explored;
  if (!sr.found) {
    out.exhausted = sr.exhausted;
    return out;
  }
  Configuration reached = D;
  for (const Activation& a : sr.activations)
    apply_activation(params, reached, a, 0);
  const auto esc = escape_at(reached, Q, A);
  out.escaped = true;
  out.fragment = std::move(sr.activations);
  out.poised_pid = esc->first;
  out.escape_cell = esc->second;
  return out;
}

CoveringResult build_covering(const ProtocolParams& params,
                              std::size_t depth_cap) {
  params.validate();
  const std::vector<std::vector<Val>> inputs = pid_inputs(params);
  CoveringResult result;
  result.c = (params.k + params.m) / params.m;  // ceil((k+1)/m)
  result.initial = initial_configuration(params, inputs);
  Configuration cur = result.initial;
  int next_fresh = 0;
  const auto stuck = [&](int stage, std::string why) {
    result.stuck_stage = stage;
    result.reason = std::move(why);
    return result;
  };
  for (int j = 1; j <= result.c - 1; ++j) {
    CoveringStage st;
    st.stage = j;
    if (next_fresh + params.m > params.n)
      return stuck(j, "not enough processes to form the stage group");
    for (int i = 0; i < params.m; ++i) st.Q.push_back(next_fresh++);
    for (;;) {
      FragmentResult fr =
          fragment_search(params, cur, st.Q, st.A, depth_cap);
      if (!fr.escaped) {
        if (!fr.exhausted)
          return stuck(j, "coverage search hit the depth cap");
        break;
      }
      for (const Activation& a : fr.fragment) {
        apply_activation(params, cur, a, 0);
        st.alpha.push_back(a);
      }
      st.A.push_back(fr.escape_cell);
      st.P.push_back(fr.poised_pid);
      st.Q.erase(std::find(st.Q.begin(), st.Q.end(), fr.poised_pid));
      if (next_fresh >= params.n)
        return stuck(j, "no replacement process for a poised writer");
      st.Q.push_back(next_fresh++);
    }
    st.D = cur;
    result.s = std::max(result.s, max_instance(st.D));
    for (int p : st.P) {
      st.beta.push_back(Activation{p, Thread::T1});
      apply_activation(params, cur, st.beta.back(), 0);
    }
    st.C_after = cur;
    result.stages.push_back(std::move(st));
  }
  result.built = true;
  return result;
}

bool obliteration_holds(const Configuration& with_gamma,
                        const Configuration& without_gamma,
                        const std::vector<int>& group, std::string* why) {
  const auto report = [&](std::string text) {
    if (why != nullptr) *why = std::move(text);
    return false;
  };
  if (with_gamma.mem != without_gamma.mem)
    return report("shared memory differs");
  if (with_gamma.machines.size() != without_gamma.machines.size())
    return report("process counts differ");
  for (std::size_t pid = 0; pid < with_gamma.machines.size(); ++pid) {
    if (contains(group, static_cast<int>(pid))) continue;
    if (!(with_gamma.machines[pid] == without_gamma.machines[pid])) {
      std::ostringstream text;
      text << "machine " << pid << " differs outside the hidden group";
      return report(text.str());
    }
  }
  if (why != nullptr) why->clear();
  return true;
}

RefutationResult splice_and_refute(const ProtocolParams& params,
                                   const CoveringResult& covering,
                                   std::size_t depth_cap) {
  RefutationResult result;
  const auto give_up = [&](std::string why) {
    result.reason = std::move(why);
    return result;
  };
  if (!covering.built) return give_up("covering was not built");
  const int s = covering.s;
  result.violation_instance = s + 1;
  if (s + 1 > params.s_instances)
    return give_up("covering consumed too many instances");
  const int needed = params.k + 1 - (covering.c - 1) * params.m;
  std::vector<int> p_all;
  for (const CoveringStage& st : covering.stages)
    for (int p : st.P) p_all.push_back(p);
  if (static_cast<int>(p_all.size()) < needed)
    return give_up("too few poised writers for the final group");

  const std::vector<Thread> threads = threads_for(params);
  Configuration cur = covering.initial;
  std::vector<Activation> all_acts;
  const auto apply_list = [&](const std::vector<Activation>& acts) {
    for (const Activation& a : acts) {
      apply_activation(params, cur, a, 0);
      all_acts.push_back(a);
    }
  };
  std::vector<int> hidden_pids;  // groups that ran hidden executions so far
  for (const CoveringStage& st : covering.stages) {
    apply_list(st.alpha);
    // Hidden run: the stage group decides its own proposals through
    // instance s+1.
    const auto goal = [&](const Configuration& c) {
      return std::all_of(st.Q.begin(), st.Q.end(), [&](int q) {
        const auto& out = c.machines[q].outputs;
        return static_cast<int>(out.size()) >= s + 1 && out[s] == q;
      });
    };
    SearchResult sr = bounded_search(params, cur, st.Q, threads, goal,
                                     depth_cap);
    if (!sr.found) {
      std::ostringstream why;
      why << "no hidden execution for stage " << st.stage << " group";
      return give_up(why.str());
    }
    apply_list(sr.activations);
    apply_list(st.beta);
    for (int q : st.Q) hidden_pids.push_back(q);
    ObliterationReport ob;
    ob.stage = st.stage;
    ob.ok = obliteration_holds(cur, st.C_after, hidden_pids,
                               &ob.explanation);
    result.obliteration.push_back(ob);
    if (!ob.ok) {
      std::ostringstream why;
      why << "stage " << st.stage
          << " block write failed to erase the hidden run: "
          << ob.explanation;
      return give_up(why.str());
    }
  }
  // The poised writers decide the remaining values after their block writes.
  const auto final_goal = [&](const Configuration& c) {
    int done = 0;
    for (int p : p_all) {
      const auto& out = c.machines[p].outputs;
      if (static_cast<int>(out.size()) >= s + 1 && out[s] == p) ++done;
    }
    return done >= needed;
  };
  SearchResult sr =
      bounded_search(params, cur, p_all, threads, final_goal, depth_cap);
  if (!sr.found)
    return give_up("no deciding continuation for the poised writers");
  apply_list(sr.activations);

  result.trace = run_from(params, covering.initial, all_acts);
  for (const DecisionEvent& e : result.trace.decisions)
    if (e.instance == s + 1) result.outputs_at_violation.insert(e.value);
  if (static_cast<int>(result.outputs_at_violation.size()) <= params.k)
    return give_up("spliced run did not exceed the agreement bound");
  result.found = true;
  return result;
}

CloneReport clone_lockstep(const ProtocolParams& params, const Trace& trace,
                           int pid, std::size_t pause_at) {
  if (!protocol_is_anonymous(params.protocol))
    throw ConfigError("clones need an anonymous protocol");
  if (pause_at >= trace.steps.size())
    throw ConfigError("pause step out of range");
  const Step& pause = trace.steps[pause_at];
  if (pause.pid != pid)
    throw ConfigError("pause step belongs to another process");
  if (pause.primitive != Primitive::Update &&
      pause.primitive != Primitive::RegisterWrite)
    throw ConfigError("pause step must be a write");

  CloneReport report;
  report.original_pid = pid;
  report.clone_pid = static_cast<int>(trace.initial.machines.size());
  report.pause_at = pause_at;

  // Widen the world by one machine; the protocol's geometry (component and
  // threshold counts) stays that of the original parameters.
  Configuration widened = trace.initial;
  ProcessMachine clone;
  clone.protocol = params.protocol;
  clone.pid = report.clone_pid;
  clone.inputs = trace.initial.machines[pid].inputs;
  widened.machines.push_back(std::move(clone));

  for (const Step& s : trace.steps) {
    report.activations.push_back(Activation{s.pid, s.thread});
    if (s.pid == pid && s.step_index < pause_at)
      report.activations.push_back(Activation{report.clone_pid, s.thread});
  }
  report.trace = run_from(params, widened, report.activations);

  report.ok = true;
  const Step* last_original = nullptr;
  std::size_t orig_cursor = 0;
  for (const Step& s : report.trace.steps) {
    if (s.pid == report.clone_pid) {
      if (last_original == nullptr || !same_observation(s, *last_original)) {
        report.ok = false;
        std::ostringstream why;
        why << "clone step " << s.step_index
            << " diverged from the original's preceding step";
        report.explanation = why.str();
        break;
      }
      continue;
    }
    const Step& recorded = trace.steps[orig_cursor++];
    if (!same_observation(s, recorded)) {
      report.ok = false;
      std::ostringstream why;
      why << "original pid " << s.pid << " diverged at step " << s.step_index
          << " once the clone was added";
      report.explanation = why.str();
      break;
    }
    if (s.pid == pid) last_original = &s;
  }

  Configuration final = widened;
  for (std::size_t i = 0; i < report.activations.size(); ++i)
    apply_activation(params, final, report.activations[i], 0);
  const ProcessMachine& cm = final.machines[report.clone_pid];
  report.pending_cell = poised_write_cell(cm);
  report.pending_value = poised_write_value(cm);
  report.final_config = std::move(final);
  const Cell expected{pause.object, pause.component};
  if (report.ok && (!report.pending_cell || *report.pending_cell != expected)) {
    report.ok = false;
    report.explanation = "clone is not poised at the held-back write";
  }
  return report;
}

Configuration resume_clone(const ProtocolParams& params,
                           const CloneReport& clone,
                           const Configuration& config) {
  Configuration out = config;
  apply_activation(params, out, Activation{clone.clone_pid, Thread::T1}, 0);
  return out;
}

namespace {

struct CloneSpec {
  int pid = 0;
  int mirrors = 0;
  std::size_t pause_pos = 0;  // index into the previous glued execution
};

}  // namespace

GluedResult build_glued(const ProtocolParams& params,
                        const std::vector<std::vector<Val>>& value_sets,
                        std::size_t depth_cap) {
  params.validate();
  if (!protocol_is_anonymous(params.protocol))
    throw ConfigError("gluing needs an anonymous protocol");
  if (params.s_instances != 1)
    throw ConfigError("gluing is a one-shot construction");
  const int c = (params.k + params.m) / params.m;
  if (static_cast<int>(value_sets.size()) != c)
    throw ConfigError("gluing needs ceil((k+1)/m) value sets");
  std::set<Val> all_values;
  for (const auto& set : value_sets) {
    if (set.empty() || static_cast<int>(set.size()) > params.m)
      throw ConfigError("each value set needs between 1 and m values");
    for (Val v : set) {
      if (v < 0 || v >= params.domain_size)
        throw ConfigError("glued value outside the input domain");
      if (!all_values.insert(v).second)
        throw ConfigError("value sets must be disjoint");
    }
  }
  if (static_cast<int>(all_values.size()) != params.k + 1)
    throw ConfigError("value sets must cover exactly k+1 values");

  GluedResult result;
  result.world = params;
  const auto blocked = [&](int stage, std::string why) {
    result.blocked_stage = stage;
    result.reason = std::move(why);
    return result;
  };

  // Groups take the lowest pids; the rest of the world is the clone pool.
  int cursor = 0;
  for (const auto& set : value_sets) {
    std::vector<int> group;
    for (std::size_t i = 0; i < set.size(); ++i) group.push_back(cursor++);
    result.groups.push_back(std::move(group));
  }
  if (cursor > params.n)
    return blocked(-1, "world has fewer processes than group members");
  std::vector<std::vector<Val>> inputs(params.n, std::vector<Val>{0});
  for (std::size_t g = 0; g < result.groups.size(); ++g) {
    std::vector<Val> sorted = value_sets[g];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      inputs[result.groups[g][i]] = {sorted[i]};
  }
  result.initial = initial_configuration(params, inputs);
  const std::vector<Thread> threads = threads_for(params);

  // Isolated runs: each group alone decides exactly its own values.
  std::vector<std::vector<Step>> alpha_steps(result.groups.size());
  for (std::size_t g = 0; g < result.groups.size(); ++g) {
    const std::vector<int>& group = result.groups[g];
    const std::vector<Val>& values = value_sets[g];
    const auto goal = [&](const Configuration& cfg) {
      for (int pid : group)
        if (cfg.machines[pid].status != Status::Halted) return false;
      return std::all_of(values.begin(), values.end(), [&](Val v) {
        return std::any_of(group.begin(), group.end(), [&](int pid) {
          return cfg.machines[pid].outputs.front() == v;
        });
      });
    };
    SearchResult sr = bounded_search(params, result.initial, group, threads,
                                     goal, depth_cap);
    if (!sr.found) {
      std::ostringstream why;
      why << "no isolated run for group " << g << " within the depth cap";
      return blocked(-1, why.str());
    }
    Trace tr = run_from(params, result.initial, sr.activations);
    result.alphas.push_back(std::move(sr.activations));
    alpha_steps[g] = std::move(tr.steps);
  }

  // Common write footprint in first-write order.
  std::vector<std::vector<Cell>> footprints(result.groups.size());
  for (std::size_t g = 0; g < result.groups.size(); ++g)
    for (const Step& s : alpha_steps[g])
      if (auto cell = step_write_cell(s); cell && !contains(footprints[g], *cell))
        footprints[g].push_back(*cell);
  for (std::size_t g = 1; g < footprints.size(); ++g)
    if (footprints[g] != footprints[0])
      return blocked(-1, "isolated runs write different cell sequences");
  result.register_seq = footprints[0];
  const int L = static_cast<int>(result.register_seq.size());

  const int clones_needed = c * L * (L - 1) / 2;
  if (cursor + clones_needed > params.n) {
    std::ostringstream why;
    why << "process budget: gluing needs " << cursor + clones_needed
        << " processes, world has " << params.n;
    return blocked(-1, why.str());
  }

  // cuts[g][j]: first activation of alpha_g writing R_{j+1}; cuts[g][L] ends
  // the run.
  std::vector<std::vector<std::size_t>> cuts(result.groups.size());
  for (std::size_t g = 0; g < result.groups.size(); ++g) {
    cuts[g].assign(L + 1, result.alphas[g].size());
    for (int j = 0; j < L; ++j) {
      for (std::size_t i = 0; i < alpha_steps[g].size(); ++i) {
        auto cell = step_write_cell(alpha_steps[g][i]);
        if (cell && *cell == result.register_seq[j]) {
          cuts[g][j] = i;
          break;
        }
      }
    }
  }

  Configuration master = result.initial;
  int next_clone = cursor;
  std::vector<Activation> beta_prev;
  std::vector<std::vector<Step>> prev_steps;  // replay of beta_prev

  const auto is_group_pid = [&](int pid) {
    for (const auto& g : result.groups)
      if (contains(g, pid)) return true;
    return false;
  };
  const auto group_of = [&](int pid) -> int {
    for (std::size_t g = 0; g < result.groups.size(); ++g)
      if (contains(result.groups[g], pid)) return static_cast<int>(g);
    return -1;
  };

  for (std::size_t g = 0; g < result.groups.size(); ++g) {
    const auto& a = result.alphas[g];
    beta_prev.insert(beta_prev.end(), a.begin(), a.begin() + cuts[g][0]);
  }
  result.stages.push_back(GluedStage{0, beta_prev, 0});

  Trace prev_trace = run_from(params, master, beta_prev);
  for (int j = 1; j <= L; ++j) {
    // One fresh clone per (group, earlier cell): it shadows the group's
    // last writer of that cell up to the write, then releases it so the
    // group re-reads its own values.
    std::vector<CloneSpec> fresh;
    for (std::size_t g = 0; g < result.groups.size(); ++g) {
      for (int w = 0; w < j - 1; ++w) {
        std::size_t pos = beta_prev.size();
        for (std::size_t i = prev_trace.steps.size(); i-- > 0;) {
          const Step& s = prev_trace.steps[i];
          auto cell = step_write_cell(s);
          if (cell && *cell == result.register_seq[w] &&
              group_of(s.pid) == static_cast<int>(g)) {
            pos = i;
            break;
          }
        }
        if (pos == beta_prev.size())
          return blocked(j, "missing group write to restore");
        CloneSpec spec;
        spec.pid = next_clone++;
        spec.mirrors = prev_trace.steps[pos].pid;
        spec.pause_pos = pos;
        master.machines[spec.pid].inputs =
            master.machines[spec.mirrors].inputs;
        fresh.push_back(spec);
      }
    }
    std::vector<Activation> beta;
    for (std::size_t i = 0; i < beta_prev.size(); ++i) {
      beta.push_back(beta_prev[i]);
      for (const CloneSpec& cl : fresh)
        if (cl.mirrors == beta_prev[i].pid && i < cl.pause_pos)
          beta.push_back(Activation{cl.pid, beta_prev[i].thread});
    }
    for (std::size_t g = 0; g < result.groups.size(); ++g) {
      for (const CloneSpec& cl : fresh)
        if (group_of(cl.mirrors) == static_cast<int>(g))
          beta.push_back(Activation{cl.pid, Thread::T1});
      const auto& a = result.alphas[g];
      beta.insert(beta.end(), a.begin() + cuts[g][j - 1],
                  a.begin() + cuts[g][j]);
    }

    Trace tr = run_from(params, master, beta);
    // Outside steppers are exactly the clones allocated so far.
    std::set<int> outside;
    for (const Step& s : tr.steps)
      if (!is_group_pid(s.pid)) outside.insert(s.pid);
    const int expected_outside =
        c * j * (j - 1) / 2;
    if (static_cast<int>(outside.size()) != expected_outside) {
      std::ostringstream why;
      why << "stage " << j << " used " << outside.size()
          << " helper processes, expected " << expected_outside;
      return blocked(j, why.str());
    }
    // Every write stays inside R_1..R_j; each group has written each of
    // them.
    std::vector<std::set<int>> written(result.groups.size());
    for (const Step& s : tr.steps) {
      auto cell = step_write_cell(s);
      if (!cell) continue;
      const auto it = std::find(result.register_seq.begin(),
                                result.register_seq.end(), *cell);
      const int idx =
          static_cast<int>(it - result.register_seq.begin());
      if (it == result.register_seq.end() || idx >= j)
        return blocked(j, "a write escaped the glued cell prefix");
      const int g = group_of(s.pid);
      if (g >= 0) written[g].insert(idx);
    }
    for (std::size_t g = 0; g < result.groups.size(); ++g) {
      for (int w = 0; w < j; ++w) {
        if (!written[g].count(w)) {
          std::ostringstream why;
          why << "group " << g << " never wrote cell " << w + 1
              << " in stage " << j;
          return blocked(j, why.str());
        }
      }
    }
    // Each group's step sequence must be a prefix of its isolated run.
    for (std::size_t g = 0; g < result.groups.size(); ++g) {
      std::size_t cursor_g = 0;
      for (const Step& s : tr.steps) {
        if (group_of(s.pid) != static_cast<int>(g)) continue;
        if (cursor_g >= cuts[g][j] ||
            !same_observation(s, alpha_steps[g][cursor_g])) {
          std::ostringstream why;
          why << "group " << g << " diverged from its isolated run in stage "
              << j;
          return blocked(j, why.str());
        }
        ++cursor_g;
      }
      if (cursor_g != cuts[g][j]) {
        std::ostringstream why;
        why << "group " << g << " fell short of its isolated prefix in stage "
            << j;
        return blocked(j, why.str());
      }
    }
    result.stages.push_back(
        GluedStage{j, beta, static_cast<int>(outside.size())});
    beta_prev = std::move(beta);
    prev_trace = std::move(tr);
  }

  result.initial = master;
  result.clones_used = next_clone - cursor;
  result.final_trace = std::move(prev_trace);
  result.built = true;
  return result;
}

}  // namespace setspace
