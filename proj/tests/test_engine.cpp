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

#include "setspace/engine.hpp"

using namespace setspace;

namespace {

ProtocolParams small_fig2() {
  ProtocolParams p;
  p.protocol = Protocol::Fig2;
  p.n = 3;
  p.k = 2;
  p.m = 1;
  p.domain_size = 3;
  return p;
}

}  // namespace

TEST_CASE("equal inputs and schedules give equal traces") {
  ProtocolParams p = small_fig2();
  Schedule s;
  s.kind = Schedule::Kind::SeededRandom;
  s.seed = 17;
  const auto inputs = seeded_inputs(p, 5);
  Trace a = run(p, inputs, s);
  Trace b = run(p, inputs, s);
  REQUIRE(a.steps.size() == b.steps.size());
  CHECK(a.steps == b.steps);
  CHECK(a.decisions == b.decisions);
  Schedule s2 = s;
  s2.seed = 18;
  Trace c = run(p, inputs, s2);
  CHECK_FALSE(a.steps == c.steps);
}

TEST_CASE("step index equals schedule index even across invocations") {
  ProtocolParams p = small_fig2();
  Schedule s;
  s.kind = Schedule::Kind::RoundRobin;
  Trace tr = run(p, seeded_inputs(p, 1), s);
  for (std::size_t i = 0; i < tr.steps.size(); ++i)
    CHECK(tr.steps[i].step_index == i);
  // Round robin activates pids cyclically, with finished machines consumed
  // as no-ops.
  for (std::size_t i = 0; i < tr.steps.size(); ++i)
    CHECK(tr.steps[i].pid == static_cast<int>(i % 3));
}

TEST_CASE("eventually-m-bounded schedules stop at the survivors") {
  ProtocolParams p = small_fig2();
  Schedule s;
  s.kind = Schedule::Kind::EventuallyMBounded;
  s.seed = 3;
  s.prefix_len = 40;
  s.survivors = {2};
  Trace tr = run(p, seeded_inputs(p, 2), s);
  REQUIRE_FALSE(tr.truncated);
  for (std::size_t i = s.prefix_len; i < tr.steps.size(); ++i)
    CHECK(tr.steps[i].pid == 2);
  bool survivor_decided = false;
  for (const DecisionEvent& e : tr.decisions)
    if (e.pid == 2) survivor_decided = true;
  CHECK(survivor_decided);
}

TEST_CASE("suite generation is deterministic and within bounds") {
  ProtocolParams p = small_fig2();
  p.m = 2;
  p.k = 2;
  auto a = gen_m_bounded_suite(p, 20, 9);
  auto b = gen_m_bounded_suite(p, 20, 9);
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].survivors == b[i].survivors);
    CHECK(a[i].survivors.size() >= 1);
    CHECK(a[i].survivors.size() <= 2);
    for (int pid : a[i].survivors) {
      CHECK(pid >= 0);
      CHECK(pid < p.n);
    }
  }
  CHECK_THROWS_AS(gen_m_bounded_suite(p, 0, 1), ConfigError);
}

TEST_CASE("step_once leaves its argument untouched") {
  ProtocolParams p = small_fig2();
  Configuration cfg = initial_configuration(p, seeded_inputs(p, 0));
  Configuration before = cfg;
  Configuration next = step_once(p, cfg, 0, Thread::T1);
  CHECK(cfg == before);
  CHECK_FALSE(next == cfg);
  CHECK(next.machines[0].status == Status::Active);
}

TEST_CASE("halted machines absorb activations as no-ops") {
  ProtocolParams p = small_fig2();
  p.n = 2;
  p.k = 1;
  Configuration cfg = initial_configuration(p, {{0}, {1}});
  for (int i = 0; i < 10; ++i)
    apply_activation(p, cfg, Activation{0, Thread::T1}, 0);
  REQUIRE(cfg.machines[0].status == Status::Halted);
  Configuration before = cfg;
  Step s = apply_activation(p, cfg, Activation{0, Thread::T1}, 0);
  CHECK(s.primitive == Primitive::Noop);
  CHECK(cfg == before);
}

TEST_CASE("scripted schedules replay exactly and can truncate") {
  ProtocolParams p = small_fig2();
  Schedule s;
  s.kind = Schedule::Kind::Scripted;
  s.script = {{0, Thread::T1}, {1, Thread::T1}, {0, Thread::T1}};
  Trace tr = run(p, seeded_inputs(p, 4), s);
  REQUIRE(tr.steps.size() == 3);
  CHECK(tr.steps[1].pid == 1);
  CHECK_FALSE(tr.truncated);

  Schedule cap;
  cap.kind = Schedule::Kind::RoundRobin;
  cap.step_cap = 4;
  Trace capped = run(p, seeded_inputs(p, 4), cap);
  CHECK(capped.truncated);
  CHECK(capped.steps.size() == 4);
}

TEST_CASE("configuration hashing agrees with equality") {
  ProtocolParams p = small_fig2();
  Configuration a = initial_configuration(p, seeded_inputs(p, 7));
  Configuration b = initial_configuration(p, seeded_inputs(p, 7));
  CHECK(a == b);
  CHECK(hash_value(a) == hash_value(b));
  apply_activation(p, b, Activation{1, Thread::T1}, 0);
  CHECK_FALSE(a == b);
}

TEST_CASE("input helpers validate their domain") {
  ProtocolParams p = small_fig2();
  const auto ins = seeded_inputs(p, 11);
  REQUIRE(ins.size() == 3);
  for (const auto& seq : ins)
    for (Val v : seq) {
      CHECK(v >= 0);
      CHECK(v < p.domain_size);
    }
  CHECK(seeded_inputs(p, 11) == ins);
  const auto pids = pid_inputs(p);
  CHECK(pids[2] == std::vector<Val>{2});
  p.domain_size = 2;
  p.k = 1;
  CHECK_THROWS_AS(pid_inputs(p), ConfigError);
}

TEST_CASE("bad schedules and inputs are config errors") {
  ProtocolParams p = small_fig2();
  Schedule s;
  s.kind = Schedule::Kind::EventuallyMBounded;
  CHECK_THROWS_AS(run(p, seeded_inputs(p, 0), s), ConfigError);  // no survivors
  s.survivors = {5};
  CHECK_THROWS_AS(run(p, seeded_inputs(p, 0), s), ConfigError);
  CHECK_THROWS_AS(initial_configuration(p, {{0}}), ConfigError);
}
