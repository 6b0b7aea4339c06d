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

#include "setspace/memory.hpp"

#include <sstream>

namespace setspace {

std::size_t hash_value(const RegisterValue& v) {
  std::size_t h = v.index();
  std::visit(
      [&h](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bot>) {
          hash_combine(h, 0x42);
        } else if constexpr (std::is_same_v<T, Val>) {
          hash_combine(h, static_cast<std::size_t>(x));
        } else if constexpr (std::is_same_v<T, IdPair>) {
          hash_combine(h, static_cast<std::size_t>(x.value));
          hash_combine(h, static_cast<std::size_t>(x.id));
        } else if constexpr (std::is_same_v<T, RepTuple>) {
          hash_combine(h, static_cast<std::size_t>(x.value));
          hash_combine(h, static_cast<std::size_t>(x.id));
          hash_combine(h, static_cast<std::size_t>(x.instance));
          for (Val y : x.history) hash_combine(h, static_cast<std::size_t>(y));
        } else if constexpr (std::is_same_v<T, AnonTuple>) {
          hash_combine(h, static_cast<std::size_t>(x.value));
          hash_combine(h, static_cast<std::size_t>(x.instance));
          for (Val y : x.history) hash_combine(h, static_cast<std::size_t>(y));
        } else if constexpr (std::is_same_v<T, ValueSeq>) {
          hash_combine(h, x.size());
          for (Val y : x) hash_combine(h, static_cast<std::size_t>(y));
        }
      },
      v);
  return h;
}

namespace {

void append_seq(std::ostream& os, const std::vector<Val>& seq) {
  os << "[";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) os << ",";
    os << seq[i];
  }
  os << "]";
}

}  // namespace

std::string to_string(const RegisterValue& v) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bot>) {
          os << "_|_";
        } else if constexpr (std::is_same_v<T, Val>) {
          os << x;
        } else if constexpr (std::is_same_v<T, IdPair>) {
          os << "(" << x.value << ",p" << x.id << ")";
        } else if constexpr (std::is_same_v<T, RepTuple>) {
          os << "(" << x.value << ",p" << x.id << ",t" << x.instance << ",";
          append_seq(os, x.history);
          os << ")";
        } else if constexpr (std::is_same_v<T, AnonTuple>) {
          os << "(" << x.value << ",t" << x.instance << ",";
          append_seq(os, x.history);
          os << ")";
        } else if constexpr (std::is_same_v<T, ValueSeq>) {
          append_seq(os, x);
        }
      },
      v);
  return os.str();
}

std::string to_string(const Cell& c) {
  if (c.component == Cell::kPlainRegister) return c.object;
  return c.object + "[" + std::to_string(c.component) + "]";
}

MemoryState make_memory(const std::string& snapshot_name, std::size_t r,
                        SnapshotMode mode, bool with_h_register) {
  MemoryState mem;
  if (r > 0) {
    SnapshotObject snap;
    snap.mode = mode;
    snap.components.assign(r, Bot{});
    mem.snapshots.emplace(snapshot_name, std::move(snap));
  }
  if (with_h_register) mem.registers.emplace("H", ValueSeq{});
  return mem;
}

namespace {

SnapshotObject& snapshot_ref(MemoryState& mem, const std::string& object) {
  auto it = mem.snapshots.find(object);
  if (it == mem.snapshots.end())
    throw std::logic_error("unknown snapshot object: " + object);
  return it->second;
}

const SnapshotObject& snapshot_ref(const MemoryState& mem,
                                   const std::string& object) {
  auto it = mem.snapshots.find(object);
  if (it == mem.snapshots.end())
    throw std::logic_error("unknown snapshot object: " + object);
  return it->second;
}

}  // namespace

void update_in_place(MemoryState& mem, const std::string& object,
                     std::size_t i, RegisterValue v) {
  SnapshotObject& snap = snapshot_ref(mem, object);
  if (i >= snap.components.size())
    throw std::logic_error("update: component index " + std::to_string(i) +
                           " out of range for " + object);
  snap.components[i] = std::move(v);
}

void write_register_in_place(MemoryState& mem, const std::string& name,
                             RegisterValue v) {
  auto it = mem.registers.find(name);
  if (it == mem.registers.end())
    throw std::logic_error("unknown register: " + name);
  it->second = std::move(v);
}

MemoryState update(const MemoryState& mem, const std::string& object,
                   std::size_t i, RegisterValue v) {
  MemoryState out = mem;
  update_in_place(out, object, i, std::move(v));
  return out;
}

std::vector<RegisterValue> scan(const MemoryState& mem,
                                const std::string& object) {
  return snapshot_ref(mem, object).components;
}

RegisterValue read_component(const MemoryState& mem, const std::string& object,
                             std::size_t i) {
  const SnapshotObject& snap = snapshot_ref(mem, object);
  if (i >= snap.components.size())
    throw std::logic_error("read_component: index out of range");
  return snap.components[i];
}

MemoryState write_register(const MemoryState& mem, const std::string& name,
                           RegisterValue v) {
  MemoryState out = mem;
  write_register_in_place(out, name, std::move(v));
  return out;
}

RegisterValue read_register(const MemoryState& mem, const std::string& name) {
  auto it = mem.registers.find(name);
  if (it == mem.registers.end())
    throw std::logic_error("unknown register: " + name);
  return it->second;
}

std::size_t register_budget(const MemoryState& mem) {
  std::size_t n = mem.registers.size();
  for (const auto& [name, snap] : mem.snapshots) n += snap.components.size();
  return n;
}

std::size_t hash_value(const MemoryState& mem) {
  std::size_t h = 0;
  for (const auto& [name, snap] : mem.snapshots) {
    hash_combine(h, std::hash<std::string>{}(name));
    for (const RegisterValue& v : snap.components)
      hash_combine(h, hash_value(v));
  }
  for (const auto& [name, v] : mem.registers) {
    hash_combine(h, std::hash<std::string>{}(name));
    hash_combine(h, hash_value(v));
  }
  return h;
}

}  // namespace setspace
