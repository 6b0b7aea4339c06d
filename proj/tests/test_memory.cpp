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

#include <doctest.h>

#include "setspace/memory.hpp"

using namespace setspace;

TEST_CASE("fresh memory starts all-bot") {
  MemoryState mem = make_memory("A", 3, SnapshotMode::Atomic, true);
  const auto s = scan(mem, "A");
  REQUIRE(s.size() == 3);
  for (const RegisterValue& v : s) CHECK(is_bot(v));
  CHECK(read_register(mem, "H") == RegisterValue{ValueSeq{}});
  CHECK(register_budget(mem) == 4);
}

TEST_CASE("update is pure and scan observes it") {
  MemoryState mem = make_memory("A", 2, SnapshotMode::Atomic, false);
  MemoryState mem2 = update(mem, "A", 1, RegisterValue{IdPair{7, 3}});
  CHECK(is_bot(scan(mem, "A")[1]));  // input state untouched
  CHECK(scan(mem2, "A")[1] == RegisterValue{IdPair{7, 3}});
  CHECK(read_component(mem2, "A", 0) == RegisterValue{Bot{}});
}

TEST_CASE("register write and read round-trip") {
  MemoryState mem;
  mem.registers.emplace("C", Bot{});
  MemoryState mem2 = write_register(mem, "C", RegisterValue{Val{5}});
  CHECK(read_register(mem, "C") == RegisterValue{Bot{}});
  CHECK(read_register(mem2, "C") == RegisterValue{Val{5}});
}

TEST_CASE("unknown names and bad components throw") {
  MemoryState mem = make_memory("A", 2, SnapshotMode::Atomic, false);
  CHECK_THROWS_AS(scan(mem, "B"), std::logic_error);
  CHECK_THROWS_AS(update(mem, "A", 2, RegisterValue{Val{1}}),
                  std::logic_error);
  CHECK_THROWS_AS(read_register(mem, "H"), std::logic_error);
}

TEST_CASE("equal states hash equally") {
  MemoryState a = make_memory("A", 4, SnapshotMode::Atomic, true);
  MemoryState b = make_memory("A", 4, SnapshotMode::Atomic, true);
  CHECK(a == b);
  CHECK(hash_value(a) == hash_value(b));
  MemoryState c = update(a, "A", 0, RegisterValue{Val{1}});
  CHECK_FALSE(a == c);
}

TEST_CASE("cells order plain registers before components") {
  Cell reg{"A", Cell::kPlainRegister};
  Cell comp0{"A", 0};
  Cell comp1{"A", 1};
  CHECK(reg < comp0);
  CHECK(comp0 < comp1);
  CHECK(to_string(comp1) == "A[1]");
  CHECK(to_string(Cell{"H", Cell::kPlainRegister}) == "H");
}

TEST_CASE("value variants compare by content") {
  RegisterValue a = RepTuple{1, 2, 3, {1, 1}};
  RegisterValue b = RepTuple{1, 2, 3, {1, 1}};
  RegisterValue c = RepTuple{1, 2, 3, {1, 2}};
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(hash_value(a) == hash_value(b));
  CHECK_FALSE(RegisterValue{Bot{}} == RegisterValue{Val{0}});
}
