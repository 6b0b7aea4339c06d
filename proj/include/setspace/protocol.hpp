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

#ifndef SETSPACE_PROTOCOL_HPP_
#define SETSPACE_PROTOCOL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "setspace/memory.hpp"
#include "setspace/value.hpp"

namespace setspace {

/// The protocols the step engine knows how to drive. The Toy* kinds are
/// deliberately under-provisioned fixtures for the refutation pipelines.
enum class Protocol {
  Fig2,            // identifier-based one-shot agreement
  Fig3,            // identifier-based repeated agreement
  Fig4,            // anonymous repeated agreement (two threads, H register)
  ToyRace,         // repeated consensus attempt over a single register
  ToyAnonRace,     // anonymous one-shot consensus over a single register
  ToyAnonWwr       // anonymous one-shot consensus: write R1, write R2, read R1
};

const char* protocol_name(Protocol p);
std::optional<Protocol> protocol_from_name(const std::string& name);
bool protocol_is_anonymous(Protocol p);
bool protocol_is_repeated(Protocol p);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolParams {
  Protocol protocol = Protocol::Fig2;
  int n = 2;                // process count
  int k = 1;                // agreement bound
  int m = 1;                // obstruction parameter
  int s_instances = 1;      // instances of repeated agreement to run
  int domain_size = 2;      // inputs drawn from {0, ..., domain_size-1}
  SnapshotMode snapshot_mode = SnapshotMode::Atomic;

  /// Snapshot components used by the protocol (0 for the plain-register toys).
  int components() const;
  /// Plain registers used alongside the snapshot object.
  int plain_registers() const;
  int l_threshold() const { return n + m - k; }

  /// Enforces 1 <= m <= k < n and the per-protocol shape constraints.
  void validate() const;

  bool operator==(const ProtocolParams&) const = default;
};

enum class Thread { T1, T2 };
enum class Status { Idle, Active, Halted };

enum class DecisionKind {
  TDeciding,        // the "<= m distinct tuples" branch
  HistoryAdopted,   // adopted from a higher-instance tuple or own history
  HAdopted          // thread 2 read the output from H
};

const char* decision_kind_name(DecisionKind k);

struct DecisionEvent {
  int pid = 0;
  int instance = 0;
  Val value = 0;
  std::size_t step_index = 0;
  DecisionKind kind = DecisionKind::TDeciding;

  bool operator==(const DecisionEvent&) const = default;
};

/// Protocol locations. One step executes the shared-memory primitive at the
/// current location plus all local computation up to the next primitive.
enum class Loc {
  AtWriteH,   // Fig4 preamble: write history into H
  AtUpdate,   // poised to update component `index` of the snapshot
  AtScan,     // poised to scan (or mid double collect)
  AtRead,     // toy protocols: poised to read the register
  AtWrite,    // toy protocols: poised to write the register
  AtWrite2,   // ToyAnonWwr: poised to write the second register
  AtReadOut   // ToyAnonWwr: poised to read back and output
};

/// Progress of a stepwise double-collect scan.
struct CollectState {
  std::vector<RegisterValue> previous;
  std::vector<RegisterValue> current;
  bool have_previous = false;
  std::size_t first_read_step = 0;

  bool operator==(const CollectState&) const = default;
};

/// One process's protocol state machine. A pure value; machine_step is the
/// only mutator. Fig4 machines never branch on pid.
struct ProcessMachine {
  Protocol protocol = Protocol::Fig2;
  int pid = 0;
  Status status = Status::Idle;
  Loc loc = Loc::AtUpdate;
  Val pref = 0;
  int index = 0;        // component the next update targets
  int instance = 0;     // t; number of invoked Propose operations
  std::vector<Val> history;
  std::vector<Val> outputs;  // outputs[t-1] = output of instance t
  std::optional<CollectState> collect;
  std::vector<Val> inputs;   // inputs[t-1] = input for instance t

  bool decided_current() const {
    return static_cast<int>(outputs.size()) >= instance;
  }
  bool operator==(const ProcessMachine&) const = default;
};

std::size_t hash_value(const ProcessMachine& m);

enum class Primitive {
  Invoke,
  Update,
  Scan,
  CollectRead,
  RegisterRead,
  RegisterWrite,
  Noop
};

const char* primitive_name(Primitive p);

/// One recorded step: the shared-memory primitive, its observed effect, and
/// any decision events it triggered.
struct Step {
  std::size_t step_index = 0;
  int pid = 0;
  Thread thread = Thread::T1;
  Primitive primitive = Primitive::Noop;
  std::string object;
  int component = Cell::kPlainRegister;
  std::optional<RegisterValue> value_written;
  std::optional<std::vector<RegisterValue>> scan_result;
  std::optional<RegisterValue> value_read;
  std::vector<DecisionEvent> events;

  bool operator==(const Step&) const = default;
};

/// Fresh machine with per-instance inputs; Idle, locals at their initial
/// values. Throws ConfigError on invalid params.
ProcessMachine make_machine(const ProtocolParams& params, int pid,
                            std::vector<Val> input_sequence);

/// Begins the machine's next Propose. Only valid on Idle machines that still
/// have instances left. May decide immediately from its own history (Fig3);
/// any events are appended to `out`.
void invoke_machine(const ProtocolParams& params, ProcessMachine& machine,
                    std::size_t step_index, std::vector<DecisionEvent>& out,
                    Step* record);

/// Executes exactly one step of an Active machine: one shared-memory
/// primitive plus trailing local computation. Returns the step record.
Step machine_step(const ProtocolParams& params, ProcessMachine& machine,
                  MemoryState& mem, Thread thread, std::size_t step_index);

/// The cell the machine's next step would write, if that step is a write or
/// update (thread-1 path for Fig4). Used by the covering builder.
std::optional<Cell> poised_write_cell(const ProcessMachine& machine);

/// The value that poised write would store.
std::optional<RegisterValue> poised_write_value(const ProcessMachine& machine);

/// Stepwise double-collect entry point: consumes one atomic component read.
/// Result mirrors the spec's {InProgress, Done(vector)}.
struct CollectOutcome {
  bool done = false;
  std::vector<RegisterValue> vector_read;  // set when done
  RegisterValue component_read;
  std::size_t component_index = 0;
};
CollectOutcome collect_step(ProcessMachine& machine, const MemoryState& mem,
                            const std::string& object, std::size_t step_index);

}  // namespace setspace

#endif  // SETSPACE_PROTOCOL_HPP_
