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

#ifndef SETSPACE_VALUE_HPP_
#define SETSPACE_VALUE_HPP_

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace setspace {

/// A domain value proposed to (and output by) an agreement instance.
using Val = int;

/// The distinguished initial register content. Compares equal only to itself.
struct Bot {
  auto operator<=>(const Bot&) const = default;
};

/// (value, id) pair stored by the identifier-based one-shot protocol.
struct IdPair {
  Val value;
  int id;
  auto operator<=>(const IdPair&) const = default;
};

/// (value, id, instance, history) tuple stored by the identifier-based
/// repeated protocol. A tuple with instance == t is called a t-tuple.
struct RepTuple {
  Val value;
  int id;
  int instance;
  std::vector<Val> history;
  auto operator<=>(const RepTuple&) const = default;
};

/// (value, instance, history) tuple stored by the anonymous repeated
/// protocol; carries no identifier.
struct AnonTuple {
  Val value;
  int instance;
  std::vector<Val> history;
  auto operator<=>(const AnonTuple&) const = default;
};

/// A sequence of outputs, as held by the shared H register.
using ValueSeq = std::vector<Val>;

/// Contents of one register or snapshot component.
using RegisterValue =
    std::variant<Bot, Val, IdPair, RepTuple, AnonTuple, ValueSeq>;

inline bool is_bot(const RegisterValue& v) {
  return std::holds_alternative<Bot>(v);
}

inline void hash_combine(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

std::size_t hash_value(const RegisterValue& v);
std::string to_string(const RegisterValue& v);

inline std::ostream& operator<<(std::ostream& os, const RegisterValue& v) {
  return os << to_string(v);
}

}  // namespace setspace

#endif  // SETSPACE_VALUE_HPP_
