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

#ifndef SETSPACE_ENGINE_HPP_
#define SETSPACE_ENGINE_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "setspace/protocol.hpp"

namespace setspace {

/// Full system state: shared memory plus every process's local state.
struct Configuration {
  MemoryState mem;
  std::vector<ProcessMachine> machines;

  bool operator==(const Configuration&) const = default;
};

std::size_t hash_value(const Configuration& c);

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const {
    return hash_value(c);
  }
};

struct Activation {
  int pid = 0;
  Thread thread = Thread::T1;

  bool operator==(const Activation&) const = default;
};

struct Schedule {
  enum class Kind { Scripted, RoundRobin, SeededRandom, EventuallyMBounded };

  Kind kind = Kind::RoundRobin;
  std::vector<Activation> script;   // Scripted
  std::uint64_t seed = 0;           // SeededRandom / EventuallyMBounded
  std::size_t prefix_len = 0;       // EventuallyMBounded: chaotic prefix
  std::vector<int> survivors;       // EventuallyMBounded: <= m pids
  std::size_t step_cap = 100000;
  int t2_period = 8;  // FIG4: every t2_period-th activation of a pid is T2
};

const char* schedule_kind_name(Schedule::Kind k);

struct Trace {
  ProtocolParams params;
  Configuration initial;
  std::vector<Step> steps;
  std::vector<DecisionEvent> decisions;
  bool truncated = false;
};

/// Initial configuration: fresh memory per the protocol's shape and one
/// Idle machine per process. inputs[p][t-1] is p's input for instance t.
Configuration initial_configuration(const ProtocolParams& params,
                                    const std::vector<std::vector<Val>>& inputs);

/// Deterministic activation source for every schedule kind.
class ScheduleStream {
 public:
  ScheduleStream(const Schedule& schedule, int n);

  Activation next();
  /// True once the stream will only ever activate the survivor set.
  bool survivors_only() const;
  const std::vector<int>& survivors() const { return schedule_.survivors; }
  bool exhausted() const;  // Scripted: script consumed

 private:
  Schedule schedule_;
  int n_;
  std::size_t emitted_ = 0;
  std::mt19937_64 rng_;
  std::vector<int> t1_counts_;  // per pid, for the T1/T2 bias
};

/// Applies one activation to a configuration: invokes Idle machines with
/// instances left, steps Active ones, and consumes activations of finished
/// machines as no-ops. Returns the step record.
Step apply_activation(const ProtocolParams& params, Configuration& config,
                      Activation act, std::size_t step_index);

/// Executes (machines, memory, schedule) into a Trace. Pure: equal arguments
/// give equal traces.
Trace run(const ProtocolParams& params,
          const std::vector<std::vector<Val>>& inputs,
          const Schedule& schedule);

/// Replays a schedule from an explicit starting configuration; used by the
/// adversary constructions, which splice fragments at mid-run configurations.
Trace run_from(const ProtocolParams& params, const Configuration& start,
               const std::vector<Activation>& activations);

/// `count` EventuallyMBounded schedules with varied survivor sets of size
/// <= m and varied chaotic prefixes, derived deterministically from seed.
std::vector<Schedule> gen_m_bounded_suite(const ProtocolParams& params,
                                          std::size_t count,
                                          std::uint64_t seed);

/// Pure single-activation transition, for configuration-level search.
Configuration step_once(const ProtocolParams& params,
                        const Configuration& config, int pid, Thread thread);

bool all_halted(const Configuration& config);

/// Per-process instance inputs drawn uniformly from the domain.
std::vector<std::vector<Val>> seeded_inputs(const ProtocolParams& params,
                                            std::uint64_t seed);

/// Inputs where process p proposes value p in every instance; requires
/// domain_size >= n. Used by the lower-bound constructions, which need
/// pairwise distinct proposals.
std::vector<std::vector<Val>> pid_inputs(const ProtocolParams& params);

}  // namespace setspace

#endif  // SETSPACE_ENGINE_HPP_
