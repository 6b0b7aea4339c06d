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

#ifndef SETSPACE_MEMORY_HPP_
#define SETSPACE_MEMORY_HPP_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "setspace/value.hpp"

namespace setspace {

/// How scans of a snapshot object are realized.
enum class SnapshotMode {
  Atomic,        // scan is a single atomic step
  DoubleCollect  // scan is driven one component read at a time
};

/// An r-component snapshot object. The component count is fixed at
/// construction and never changes.
struct SnapshotObject {
  SnapshotMode mode = SnapshotMode::Atomic;
  std::vector<RegisterValue> components;

  bool operator==(const SnapshotObject&) const = default;
};

/// The shared part of a configuration: named snapshot objects plus named
/// plain registers. All operations on it are pure value transitions; the
/// *_in_place variants exist for the execution engine's hot loop.
struct MemoryState {
  std::map<std::string, SnapshotObject> snapshots;
  std::map<std::string, RegisterValue> registers;

  bool operator==(const MemoryState&) const = default;
};

/// One shared-memory cell, the unit of the space accounting used by all
/// bounds: either component `component` of snapshot `object`, or (with
/// component == kPlainRegister) the plain register named `object`.
struct Cell {
  std::string object;
  int component = -1;

  static constexpr int kPlainRegister = -1;

  auto operator<=>(const Cell&) const = default;
};

std::string to_string(const Cell& c);

MemoryState make_memory(const std::string& snapshot_name, std::size_t r,
                        SnapshotMode mode, bool with_h_register);

void update_in_place(MemoryState& mem, const std::string& object,
                     std::size_t i, RegisterValue v);
void write_register_in_place(MemoryState& mem, const std::string& name,
                             RegisterValue v);

/// update(i, v): writes v to component i. Pure; the input state is left
/// unmodified. Out-of-range components are a protocol bug, not a model
/// condition, and throw.
MemoryState update(const MemoryState& mem, const std::string& object,
                   std::size_t i, RegisterValue v);

/// Atomic scan: the exact component vector at this configuration.
std::vector<RegisterValue> scan(const MemoryState& mem,
                                const std::string& object);

/// Single component read, used to drive double-collect scans.
RegisterValue read_component(const MemoryState& mem, const std::string& object,
                             std::size_t i);

MemoryState write_register(const MemoryState& mem, const std::string& name,
                           RegisterValue v);
RegisterValue read_register(const MemoryState& mem, const std::string& name);

/// Number of snapshot components plus plain registers. Each atomic snapshot
/// component counts as one register.
std::size_t register_budget(const MemoryState& mem);

std::size_t hash_value(const MemoryState& mem);

}  // namespace setspace

#endif  // SETSPACE_MEMORY_HPP_
