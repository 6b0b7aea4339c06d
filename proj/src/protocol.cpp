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

#include "setspace/protocol.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <set>

namespace setspace {

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Fig2: return "FIG2";
    case Protocol::Fig3: return "FIG3";
    case Protocol::Fig4: return "FIG4";
    case Protocol::ToyRace: return "TOY_RACE";
    case Protocol::ToyAnonRace: return "TOY_ANON_RACE";
    case Protocol::ToyAnonWwr: return "TOY_ANON_WWR";
  }
  return "?";
}

std::optional<Protocol> protocol_from_name(const std::string& name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  for (Protocol p : {Protocol::Fig2, Protocol::Fig3, Protocol::Fig4,
                     Protocol::ToyRace, Protocol::ToyAnonRace,
                     Protocol::ToyAnonWwr}) {
    if (upper == protocol_name(p)) return p;
  }
  return std::nullopt;
}

bool protocol_is_anonymous(Protocol p) {
  return p == Protocol::Fig4 || p == Protocol::ToyAnonRace ||
         p == Protocol::ToyAnonWwr;
}

bool protocol_is_repeated(Protocol p) {
  return p == Protocol::Fig3 || p == Protocol::Fig4 || p == Protocol::ToyRace;
}

const char* decision_kind_name(DecisionKind k) {
  switch (k) {
    case DecisionKind::TDeciding: return "t_deciding";
    case DecisionKind::HistoryAdopted: return "history_adopted";
    case DecisionKind::HAdopted: return "h_adopted";
  }
  return "?";
}

const char* primitive_name(Primitive p) {
  switch (p) {
    case Primitive::Invoke: return "invoke";
    case Primitive::Update: return "update";
    case Primitive::Scan: return "scan";
    case Primitive::CollectRead: return "collect_read";
    case Primitive::RegisterRead: return "register_read";
    case Primitive::RegisterWrite: return "register_write";
    case Primitive::Noop: return "noop";
  }
  return "?";
}

int ProtocolParams::components() const {
  switch (protocol) {
    case Protocol::Fig2:
    case Protocol::Fig3:
      // The snapshot always has n+2m-k components; the min(n+2m-k, n)
      // register figure is an implementation-cost statement (when the
      // component count exceeds n, the snapshot is realizable from n
      // single-writer registers), not the protocol's geometry.
      return n + 2 * m - k;
    case Protocol::Fig4:
      return (m + 1) * (n - k) + m * m;
    default:
      return 0;
  }
}

int ProtocolParams::plain_registers() const {
  switch (protocol) {
    case Protocol::Fig4: return 1;       // H
    case Protocol::ToyRace: return 1;    // C
    case Protocol::ToyAnonRace: return 1;
    case Protocol::ToyAnonWwr: return 2;
    default: return 0;
  }
}

void ProtocolParams::validate() const {
  if (!(1 <= m && m <= k && k < n))
    throw ConfigError("params must satisfy 1 <= m <= k < n");
  if (domain_size <= k)
    throw ConfigError("domain size must exceed k");
  if (s_instances < 1) throw ConfigError("s_instances must be >= 1");
  if (!protocol_is_repeated(protocol) && s_instances != 1)
    throw ConfigError(std::string(protocol_name(protocol)) +
                      " is one-shot; s_instances must be 1");
  if ((protocol == Protocol::ToyRace || protocol == Protocol::ToyAnonRace ||
       protocol == Protocol::ToyAnonWwr) &&
      !(k == 1 && m == 1))
    throw ConfigError("toy fixtures are consensus protocols (k = m = 1)");
  if (snapshot_mode == SnapshotMode::DoubleCollect &&
      protocol != Protocol::Fig4)
    throw ConfigError("double-collect snapshots are only wired up for FIG4");
}

std::size_t hash_value(const ProcessMachine& m) {
  std::size_t h = static_cast<std::size_t>(m.protocol);
  hash_combine(h, static_cast<std::size_t>(m.pid));
  hash_combine(h, static_cast<std::size_t>(m.status));
  hash_combine(h, static_cast<std::size_t>(m.loc));
  hash_combine(h, static_cast<std::size_t>(m.pref));
  hash_combine(h, static_cast<std::size_t>(m.index));
  hash_combine(h, static_cast<std::size_t>(m.instance));
  for (Val v : m.history) hash_combine(h, static_cast<std::size_t>(v));
  for (Val v : m.outputs) hash_combine(h, static_cast<std::size_t>(v) ^ 0xa5);
  if (m.collect) {
    hash_combine(h, m.collect->current.size());
    hash_combine(h, m.collect->have_previous ? 1 : 2);
    for (const RegisterValue& v : m.collect->previous)
      hash_combine(h, hash_value(v));
    for (const RegisterValue& v : m.collect->current)
      hash_combine(h, hash_value(v));
  }
  return h;
}

ProcessMachine make_machine(const ProtocolParams& params, int pid,
                            std::vector<Val> input_sequence) {
  params.validate();
  if (pid < 0 || pid >= params.n) throw ConfigError("pid out of range");
  if (static_cast<int>(input_sequence.size()) < params.s_instances)
    throw ConfigError("input sequence must cover all instances");
  ProcessMachine m;
  m.protocol = params.protocol;
  m.pid = pid;
  m.inputs = std::move(input_sequence);
  return m;
}

namespace {

constexpr const char* kSnap = "A";

Val current_input(const ProcessMachine& m) {
  return m.inputs.at(static_cast<std::size_t>(m.instance) - 1);
}

void decide(const ProtocolParams& params, ProcessMachine& m, Val value,
            DecisionKind kind, std::size_t step_index,
            std::vector<DecisionEvent>& events) {
  m.outputs.push_back(value);
  m.status =
      m.instance >= params.s_instances ? Status::Halted : Status::Idle;
  events.push_back(DecisionEvent{m.pid, m.instance, value, step_index, kind});
}

// Smallest j1 such that s[j1] equals some later s[j2], restricted to entries
// accepted by `eligible`.
template <typename Pred>
std::optional<std::size_t> min_duplicate(const std::vector<RegisterValue>& s,
                                         Pred eligible) {
  for (std::size_t j1 = 0; j1 < s.size(); ++j1) {
    if (!eligible(s[j1])) continue;
    for (std::size_t j2 = j1 + 1; j2 < s.size(); ++j2)
      if (s[j1] == s[j2]) return j1;
  }
  return std::nullopt;
}

std::size_t distinct_count(const std::vector<RegisterValue>& s) {
  std::set<RegisterValue> d(s.begin(), s.end());
  return d.size();
}

void fig2_after_scan(const ProtocolParams& params, ProcessMachine& m,
                     const std::vector<RegisterValue>& s,
                     std::size_t step_index,
                     std::vector<DecisionEvent>& events) {
  const int r = params.components();
  const bool all_non_bot =
      std::none_of(s.begin(), s.end(), [](const auto& v) { return is_bot(v); });
  if (all_non_bot && distinct_count(s) <= static_cast<std::size_t>(params.m)) {
    auto j1 = min_duplicate(s, [](const auto&) { return true; });
    assert(j1 && "<= m distinct pairs among r > m entries force a duplicate");
    decide(params, m, std::get<IdPair>(s[*j1]).value, DecisionKind::TDeciding,
           step_index, events);
    return;
  }
  const IdPair own{m.pref, m.pid};
  bool others_clean = true;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (static_cast<int>(j) == m.index) continue;
    if (is_bot(s[j]) || s[j] == RegisterValue{own}) {
      others_clean = false;
      break;
    }
  }
  auto dup = min_duplicate(s, [](const auto&) { return true; });
  // Adopt only when it actually changes pref. A no-op adoption would pin
  // the index forever: a lone survivor staring at a stale duplicated pair
  // would re-adopt it every iteration and never overwrite the stale
  // components it needs to decide.
  if (others_clean && dup &&
      std::get<IdPair>(s[*dup]).value != m.pref) {
    m.pref = std::get<IdPair>(s[*dup]).value;
  } else {
    m.index = (m.index + 1) % r;
  }
}

void fig3_after_scan(const ProtocolParams& params, ProcessMachine& m,
                     const std::vector<RegisterValue>& s,
                     std::size_t step_index,
                     std::vector<DecisionEvent>& events) {
  const int r = params.components();
  // Adopt from any process already past this instance.
  for (const RegisterValue& v : s) {
    const auto* rt = std::get_if<RepTuple>(&v);
    if (rt != nullptr && rt->instance > m.instance) {
      assert(static_cast<int>(rt->history.size()) >= m.instance);
      m.history = rt->history;
      decide(params, m, m.history[m.instance - 1],
             DecisionKind::HistoryAdopted, step_index, events);
      return;
    }
  }
  const auto is_current = [&m](const RegisterValue& v) {
    const auto* rt = std::get_if<RepTuple>(&v);
    return rt != nullptr && rt->instance == m.instance;
  };
  const bool all_current = std::all_of(s.begin(), s.end(), is_current);
  if (all_current && distinct_count(s) <= static_cast<std::size_t>(params.m)) {
    auto j1 = min_duplicate(s, is_current);
    assert(j1 && "pigeonhole: <= m distinct t-tuples among r > m entries");
    const Val w = std::get<RepTuple>(s[*j1]).value;
    m.history.push_back(w);
    decide(params, m, w, DecisionKind::TDeciding, step_index, events);
    return;
  }
  const RepTuple own{m.pref, m.pid, m.instance, m.history};
  bool others_clean = true;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (static_cast<int>(j) == m.index) continue;
    if (is_bot(s[j]) || s[j] == RegisterValue{own}) {
      others_clean = false;
      break;
    }
  }
  auto dup = min_duplicate(s, is_current);
  // Same guard as the one-shot version: a no-op adoption must fall through
  // to the index advance or a lone survivor can spin forever.
  if (others_clean && dup &&
      std::get<RepTuple>(s[*dup]).value != m.pref) {
    m.pref = std::get<RepTuple>(s[*dup]).value;
  } else {
    m.index = (m.index + 1) % r;
  }
}

void fig4_after_scan(const ProtocolParams& params, ProcessMachine& m,
                     const std::vector<RegisterValue>& s,
                     std::size_t step_index,
                     std::vector<DecisionEvent>& events) {
  const int r = params.components();
  const int l = params.l_threshold();
  for (const RegisterValue& v : s) {
    const auto* at = std::get_if<AnonTuple>(&v);
    if (at != nullptr && at->instance > m.instance) {
      assert(static_cast<int>(at->history.size()) >= m.instance);
      m.history = at->history;
      decide(params, m, m.history[m.instance - 1],
             DecisionKind::HistoryAdopted, step_index, events);
      return;
    }
  }
  const auto is_current = [&m](const RegisterValue& v) {
    const auto* at = std::get_if<AnonTuple>(&v);
    return at != nullptr && at->instance == m.instance;
  };
  const bool all_current = std::all_of(s.begin(), s.end(), is_current);
  // Occurrence count per value among current-instance tuples.
  std::map<Val, int> freq;
  for (const RegisterValue& v : s)
    if (is_current(v)) ++freq[std::get<AnonTuple>(v).value];
  if (all_current && distinct_count(s) <= static_cast<std::size_t>(params.m)) {
    // Most frequent value; ties broken toward the smallest value.
    Val w = freq.begin()->first;
    int best = freq.begin()->second;
    for (const auto& [v, c] : freq)
      if (c > best) { w = v; best = c; }
    m.history.push_back(w);
    decide(params, m, w, DecisionKind::TDeciding, step_index, events);
    return;
  }
  const int own = freq.count(m.pref) ? freq[m.pref] : 0;
  if (own < l) {
    // Adopt a value held in at least l current-instance tuples, preferring
    // the most frequent, then the smallest.
    std::optional<Val> pick;
    int best = 0;
    for (const auto& [v, c] : freq) {
      if (v == m.pref || c < l) continue;
      if (!pick || c > best) { pick = v; best = c; }
    }
    if (pick) m.pref = *pick;
  }
  m.index = (m.index + 1) % r;
}

}  // namespace

void invoke_machine(const ProtocolParams& params, ProcessMachine& m,
                    std::size_t step_index, std::vector<DecisionEvent>& out,
                    Step* record) {
  if (m.status != Status::Idle)
    throw std::logic_error("invoke on a non-idle machine");
  if (m.instance >= params.s_instances)
    throw std::logic_error("no instances left to invoke");
  ++m.instance;
  m.status = Status::Active;
  if (record != nullptr) {
    record->primitive = Primitive::Invoke;
    record->value_written = RegisterValue{current_input(m)};
  }
  switch (m.protocol) {
    case Protocol::Fig2:
      m.pref = current_input(m);
      m.index = 0;
      m.loc = Loc::AtUpdate;
      break;
    case Protocol::Fig3:
      if (static_cast<int>(m.history.size()) >= m.instance) {
        decide(params, m, m.history[m.instance - 1],
               DecisionKind::HistoryAdopted, step_index, out);
        break;
      }
      m.pref = current_input(m);
      m.loc = Loc::AtUpdate;  // index persists across instances
      break;
    case Protocol::Fig4:
      m.loc = Loc::AtWriteH;  // H write and own-history check are a step
      break;
    case Protocol::ToyRace:
      if (static_cast<int>(m.history.size()) >= m.instance) {
        decide(params, m, m.history[m.instance - 1],
               DecisionKind::HistoryAdopted, step_index, out);
        break;
      }
      m.loc = Loc::AtRead;
      break;
    case Protocol::ToyAnonRace:
      m.loc = Loc::AtRead;
      break;
    case Protocol::ToyAnonWwr:
      m.loc = Loc::AtWrite;
      break;
  }
  if (record != nullptr) record->events = out;
}

CollectOutcome collect_step(ProcessMachine& m, const MemoryState& mem,
                            const std::string& object,
                            std::size_t step_index) {
  if (!m.collect) {
    CollectState fresh;
    fresh.first_read_step = step_index;
    m.collect = fresh;
  }
  CollectState& cs = *m.collect;
  const std::size_t r = mem.snapshots.at(object).components.size();
  const std::size_t idx = cs.current.size();
  CollectOutcome out;
  out.component_index = idx;
  out.component_read = read_component(mem, object, idx);
  cs.current.push_back(out.component_read);
  if (cs.current.size() == r) {
    if (cs.have_previous && cs.previous == cs.current) {
      out.done = true;
      out.vector_read = cs.current;
      return out;
    }
    cs.previous = std::move(cs.current);
    cs.current.clear();
    cs.have_previous = true;
  }
  return out;
}

Step machine_step(const ProtocolParams& params, ProcessMachine& m,
                  MemoryState& mem, Thread thread, std::size_t step_index) {
  if (m.status != Status::Active)
    throw std::logic_error("machine_step on a non-active machine");
  if (thread == Thread::T2 && m.protocol != Protocol::Fig4)
    throw std::logic_error("thread T2 only exists for FIG4");
  Step rec;
  rec.step_index = step_index;
  rec.pid = m.pid;
  rec.thread = thread;

  // Fig4 preamble runs regardless of which thread is activated.
  if (m.protocol == Protocol::Fig4 && m.loc == Loc::AtWriteH) {
    write_register_in_place(mem, "H", ValueSeq{m.history});
    rec.primitive = Primitive::RegisterWrite;
    rec.object = "H";
    rec.value_written = RegisterValue{ValueSeq{m.history}};
    if (static_cast<int>(m.history.size()) >= m.instance) {
      decide(params, m, m.history[m.instance - 1],
             DecisionKind::HistoryAdopted, step_index, rec.events);
    } else {
      m.pref = current_input(m);
      m.loc = Loc::AtUpdate;
    }
    return rec;
  }
  if (m.protocol == Protocol::Fig4 && thread == Thread::T2) {
    const RegisterValue h = read_register(mem, "H");
    rec.primitive = Primitive::RegisterRead;
    rec.object = "H";
    rec.value_read = h;
    const auto& seq = std::get<ValueSeq>(h);
    if (static_cast<int>(seq.size()) >= m.instance) {
      const Val w = seq[m.instance - 1];
      m.history.push_back(w);
      m.collect.reset();  // abandon any in-flight thread-1 collect
      decide(params, m, w, DecisionKind::HAdopted, step_index, rec.events);
    }
    return rec;
  }

  switch (m.protocol) {
    case Protocol::Fig2:
    case Protocol::Fig3:
    case Protocol::Fig4: {
      if (m.loc == Loc::AtUpdate) {
        RegisterValue v = *poised_write_value(m);
        update_in_place(mem, kSnap, static_cast<std::size_t>(m.index), v);
        rec.primitive = Primitive::Update;
        rec.object = kSnap;
        rec.component = m.index;
        rec.value_written = std::move(v);
        m.loc = Loc::AtScan;
        return rec;
      }
      assert(m.loc == Loc::AtScan);
      std::vector<RegisterValue> s;
      if (mem.snapshots.at(kSnap).mode == SnapshotMode::Atomic) {
        s = scan(mem, kSnap);
        rec.primitive = Primitive::Scan;
        rec.object = kSnap;
        rec.scan_result = s;
      } else {
        CollectOutcome co = collect_step(m, mem, kSnap, step_index);
        rec.primitive = Primitive::CollectRead;
        rec.object = kSnap;
        rec.component = static_cast<int>(co.component_index);
        rec.value_read = co.component_read;
        if (!co.done) return rec;
        s = std::move(co.vector_read);
        rec.scan_result = s;
        m.collect.reset();
      }
      if (m.protocol == Protocol::Fig2)
        fig2_after_scan(params, m, s, step_index, rec.events);
      else if (m.protocol == Protocol::Fig3)
        fig3_after_scan(params, m, s, step_index, rec.events);
      else
        fig4_after_scan(params, m, s, step_index, rec.events);
      if (m.status == Status::Active) m.loc = Loc::AtUpdate;
      return rec;
    }
    case Protocol::ToyRace: {
      if (m.loc == Loc::AtRead) {
        const RegisterValue c = read_register(mem, "C");
        rec.primitive = Primitive::RegisterRead;
        rec.object = "C";
        rec.value_read = c;
        const auto& seq = std::get<ValueSeq>(c);
        if (static_cast<int>(seq.size()) >= m.instance) {
          m.history = seq;
          decide(params, m, seq[m.instance - 1], DecisionKind::HistoryAdopted,
                 step_index, rec.events);
        } else {
          m.loc = Loc::AtWrite;
        }
        return rec;
      }
      assert(m.loc == Loc::AtWrite);
      RegisterValue v = *poised_write_value(m);
      write_register_in_place(mem, "C", v);
      rec.primitive = Primitive::RegisterWrite;
      rec.object = "C";
      rec.value_written = std::move(v);
      const Val in = current_input(m);
      m.history.push_back(in);
      decide(params, m, in, DecisionKind::TDeciding, step_index, rec.events);
      return rec;
    }
    case Protocol::ToyAnonRace: {
      if (m.loc == Loc::AtRead) {
        const RegisterValue c = read_register(mem, "C");
        rec.primitive = Primitive::RegisterRead;
        rec.object = "C";
        rec.value_read = c;
        if (!is_bot(c)) {
          decide(params, m, std::get<Val>(c), DecisionKind::HistoryAdopted,
                 step_index, rec.events);
        } else {
          m.loc = Loc::AtWrite;
        }
        return rec;
      }
      assert(m.loc == Loc::AtWrite);
      const Val in = current_input(m);
      write_register_in_place(mem, "C", RegisterValue{in});
      rec.primitive = Primitive::RegisterWrite;
      rec.object = "C";
      rec.value_written = RegisterValue{in};
      decide(params, m, in, DecisionKind::TDeciding, step_index, rec.events);
      return rec;
    }
    case Protocol::ToyAnonWwr: {
      if (m.loc == Loc::AtWrite || m.loc == Loc::AtWrite2) {
        const char* reg = m.loc == Loc::AtWrite ? "R1" : "R2";
        const Val in = current_input(m);
        write_register_in_place(mem, reg, RegisterValue{in});
        rec.primitive = Primitive::RegisterWrite;
        rec.object = reg;
        rec.value_written = RegisterValue{in};
        m.loc = m.loc == Loc::AtWrite ? Loc::AtWrite2 : Loc::AtReadOut;
        return rec;
      }
      assert(m.loc == Loc::AtReadOut);
      const RegisterValue c = read_register(mem, "R1");
      rec.primitive = Primitive::RegisterRead;
      rec.object = "R1";
      rec.value_read = c;
      decide(params, m, std::get<Val>(c), DecisionKind::TDeciding, step_index,
             rec.events);
      return rec;
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<Cell> poised_write_cell(const ProcessMachine& m) {
  if (m.status != Status::Active) return std::nullopt;
  switch (m.protocol) {
    case Protocol::Fig2:
    case Protocol::Fig3:
      if (m.loc == Loc::AtUpdate) return Cell{kSnap, m.index};
      return std::nullopt;
    case Protocol::Fig4:
      if (m.loc == Loc::AtWriteH) return Cell{"H", Cell::kPlainRegister};
      if (m.loc == Loc::AtUpdate) return Cell{kSnap, m.index};
      return std::nullopt;
    case Protocol::ToyRace:
    case Protocol::ToyAnonRace:
      if (m.loc == Loc::AtWrite) return Cell{"C", Cell::kPlainRegister};
      return std::nullopt;
    case Protocol::ToyAnonWwr:
      if (m.loc == Loc::AtWrite) return Cell{"R1", Cell::kPlainRegister};
      if (m.loc == Loc::AtWrite2) return Cell{"R2", Cell::kPlainRegister};
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<RegisterValue> poised_write_value(const ProcessMachine& m) {
  if (!poised_write_cell(m)) return std::nullopt;
  switch (m.protocol) {
    case Protocol::Fig2:
      return RegisterValue{IdPair{m.pref, m.pid}};
    case Protocol::Fig3:
      return RegisterValue{RepTuple{m.pref, m.pid, m.instance, m.history}};
    case Protocol::Fig4:
      if (m.loc == Loc::AtWriteH) return RegisterValue{ValueSeq{m.history}};
      return RegisterValue{AnonTuple{m.pref, m.instance, m.history}};
    case Protocol::ToyRace: {
      ValueSeq seq = m.history;
      seq.push_back(current_input(m));
      return RegisterValue{std::move(seq)};
    }
    case Protocol::ToyAnonRace:
    case Protocol::ToyAnonWwr:
      return RegisterValue{current_input(m)};
  }
  return std::nullopt;
}

}  // namespace setspace
