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

#include "setspace/engine.hpp"

#include <algorithm>

namespace setspace {

std::size_t hash_value(const Configuration& c) {
  std::size_t h = hash_value(c.mem);
  for (const ProcessMachine& m : c.machines) hash_combine(h, hash_value(m));
  return h;
}

const char* schedule_kind_name(Schedule::Kind k) {
  switch (k) {
    case Schedule::Kind::Scripted: return "scripted";
    case Schedule::Kind::RoundRobin: return "round_robin";
    case Schedule::Kind::SeededRandom: return "seeded_random";
    case Schedule::Kind::EventuallyMBounded: return "eventually_m_bounded";
  }
  return "?";
}

Configuration initial_configuration(
    const ProtocolParams& params, const std::vector<std::vector<Val>>& inputs) {
  params.validate();
  if (static_cast<int>(inputs.size()) != params.n)
    throw ConfigError("need one input sequence per process");
  Configuration config;
  switch (params.protocol) {
    case Protocol::Fig2:
    case Protocol::Fig3:
      config.mem = make_memory("A", params.components(), params.snapshot_mode,
                               /*with_h_register=*/false);
      break;
    case Protocol::Fig4:
      config.mem = make_memory("A", params.components(), params.snapshot_mode,
                               /*with_h_register=*/true);
      break;
    case Protocol::ToyRace:
      config.mem.registers.emplace("C", ValueSeq{});
      break;
    case Protocol::ToyAnonRace:
      config.mem.registers.emplace("C", Bot{});
      break;
    case Protocol::ToyAnonWwr:
      config.mem.registers.emplace("R1", Bot{});
      config.mem.registers.emplace("R2", Bot{});
      break;
  }
  config.machines.reserve(params.n);
  for (int pid = 0; pid < params.n; ++pid)
    config.machines.push_back(make_machine(params, pid, inputs[pid]));
  return config;
}

ScheduleStream::ScheduleStream(const Schedule& schedule, int n)
    : schedule_(schedule), n_(n), rng_(schedule.seed), t1_counts_(n, 0) {
  if (schedule_.kind == Schedule::Kind::EventuallyMBounded &&
      schedule_.survivors.empty())
    throw ConfigError("EventuallyMBounded schedule needs survivors");
  for (const Activation& a : schedule_.script)
    if (a.pid < 0 || a.pid >= n)
      throw ConfigError("scripted activation pid out of range");
  for (int pid : schedule_.survivors)
    if (pid < 0 || pid >= n) throw ConfigError("survivor pid out of range");
}

bool ScheduleStream::survivors_only() const {
  return schedule_.kind == Schedule::Kind::EventuallyMBounded &&
         emitted_ >= schedule_.prefix_len;
}

bool ScheduleStream::exhausted() const {
  return schedule_.kind == Schedule::Kind::Scripted &&
         emitted_ >= schedule_.script.size();
}

Activation ScheduleStream::next() {
  Activation act;
  switch (schedule_.kind) {
    case Schedule::Kind::Scripted:
      act = schedule_.script.at(emitted_);
      ++emitted_;
      return act;
    case Schedule::Kind::RoundRobin:
      act.pid = static_cast<int>(emitted_ % n_);
      break;
    case Schedule::Kind::SeededRandom:
      act.pid = static_cast<int>(rng_() % n_);
      break;
    case Schedule::Kind::EventuallyMBounded:
      if (emitted_ < schedule_.prefix_len) {
        act.pid = static_cast<int>(rng_() % n_);
      } else {
        act.pid = schedule_.survivors[rng_() % schedule_.survivors.size()];
      }
      break;
  }
  // Bias toward thread 1; every t2_period-th activation of a pid runs its
  // H-watcher thread.
  int& c = t1_counts_[act.pid];
  act.thread =
      (++c % schedule_.t2_period == 0) ? Thread::T2 : Thread::T1;
  ++emitted_;
  return act;
}

Step apply_activation(const ProtocolParams& params, Configuration& config,
                      Activation act, std::size_t step_index) {
  if (act.pid < 0 || act.pid >= static_cast<int>(config.machines.size()))
    throw std::logic_error("activation pid out of range");
  if (params.protocol != Protocol::Fig4) act.thread = Thread::T1;
  ProcessMachine& m = config.machines[act.pid];
  if (m.status == Status::Halted) {
    Step rec;
    rec.step_index = step_index;
    rec.pid = act.pid;
    rec.thread = act.thread;
    rec.primitive = Primitive::Noop;
    return rec;
  }
  if (m.status == Status::Idle) {
    Step rec;
    rec.step_index = step_index;
    rec.pid = act.pid;
    rec.thread = act.thread;
    std::vector<DecisionEvent> events;
    invoke_machine(params, m, step_index, events, &rec);
    return rec;
  }
  return machine_step(params, m, config.mem, act.thread, step_index);
}

namespace {

bool survivors_done(const Configuration& config,
                    const std::vector<int>& survivors) {
  return std::all_of(survivors.begin(), survivors.end(), [&](int pid) {
    return config.machines[pid].status == Status::Halted;
  });
}

}  // namespace

bool all_halted(const Configuration& config) {
  return std::all_of(
      config.machines.begin(), config.machines.end(),
      [](const ProcessMachine& m) { return m.status == Status::Halted; });
}

Trace run(const ProtocolParams& params,
          const std::vector<std::vector<Val>>& inputs,
          const Schedule& schedule) {
  Trace trace;
  trace.params = params;
  trace.initial = initial_configuration(params, inputs);
  Configuration config = trace.initial;
  ScheduleStream stream(schedule, params.n);
  for (std::size_t idx = 0;; ++idx) {
    if (all_halted(config)) break;
    if (stream.survivors_only() && survivors_done(config, stream.survivors()))
      break;
    if (stream.exhausted()) break;
    if (idx >= schedule.step_cap) {
      trace.truncated = true;
      break;
    }
    Step rec = apply_activation(params, config, stream.next(), idx);
    for (const DecisionEvent& e : rec.events) trace.decisions.push_back(e);
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

Trace run_from(const ProtocolParams& params, const Configuration& start,
               const std::vector<Activation>& activations) {
  Trace trace;
  trace.params = params;
  trace.initial = start;
  Configuration config = start;
  for (std::size_t idx = 0; idx < activations.size(); ++idx) {
    Step rec = apply_activation(params, config, activations[idx], idx);
    for (const DecisionEvent& e : rec.events) trace.decisions.push_back(e);
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

std::vector<Schedule> gen_m_bounded_suite(const ProtocolParams& params,
                                          std::size_t count,
                                          std::uint64_t seed) {
  if (count == 0) throw ConfigError("suite count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Schedule> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Schedule s;
    s.kind = Schedule::Kind::EventuallyMBounded;
    s.seed = rng();
    s.prefix_len = rng() % 512;
    const int size = 1 + static_cast<int>(rng() % params.m);
    std::vector<int> pids(params.n);
    for (int p = 0; p < params.n; ++p) pids[p] = p;
    std::shuffle(pids.begin(), pids.end(), rng);
    s.survivors.assign(pids.begin(), pids.begin() + size);
    std::sort(s.survivors.begin(), s.survivors.end());
    out.push_back(std::move(s));
  }
  return out;
}

Configuration step_once(const ProtocolParams& params,
                        const Configuration& config, int pid, Thread thread) {
  Configuration out = config;
  apply_activation(params, out, Activation{pid, thread}, 0);
  return out;
}

std::vector<std::vector<Val>> seeded_inputs(const ProtocolParams& params,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eed1234abcdULL);
  std::vector<std::vector<Val>> inputs(params.n);
  for (int p = 0; p < params.n; ++p) {
    inputs[p].resize(params.s_instances);
    for (int t = 0; t < params.s_instances; ++t)
      inputs[p][t] = static_cast<Val>(rng() % params.domain_size);
  }
  return inputs;
}

std::vector<std::vector<Val>> pid_inputs(const ProtocolParams& params) {
  if (params.domain_size < params.n)
    throw ConfigError("pid inputs need domain_size >= n");
  std::vector<std::vector<Val>> inputs(params.n);
  for (int p = 0; p < params.n; ++p)
    inputs[p].assign(params.s_instances, static_cast<Val>(p));
  return inputs;
}

}  // namespace setspace
