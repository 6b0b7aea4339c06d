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

#include "setspace/checks.hpp"

using namespace setspace;

namespace {

ProtocolParams fig2(int n, int k, int m) {
  ProtocolParams p;
  p.protocol = Protocol::Fig2;
  p.n = n;
  p.k = k;
  p.m = m;
  p.domain_size = k + 1;
  return p;
}

Trace seeded_run(const ProtocolParams& p, std::uint64_t seed) {
  Schedule s;
  s.kind = Schedule::Kind::SeededRandom;
  s.seed = seed;
  s.step_cap = 20000;
  return run(p, seeded_inputs(p, seed), s);
}

}  // namespace

TEST_CASE("honest runs satisfy validity and agreement") {
  ProtocolParams p = fig2(4, 2, 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Trace tr = seeded_run(p, seed);
    CHECK(check_validity(tr).passed());
    CHECK(check_k_agreement(tr, p.k).passed());
    CHECK(monitor_lemma2(tr).passed());
    CHECK(monitor_lemma4(tr, p).verdict != Verdict::Fail);
    CHECK(replay(tr).passed());
  }
}

TEST_CASE("validity flags an output nobody proposed") {
  ProtocolParams p = fig2(3, 2, 1);
  Trace tr = seeded_run(p, 1);
  REQUIRE_FALSE(tr.decisions.empty());
  Trace bad = tr;
  bad.decisions[0].value = p.domain_size + 5;
  PropertyReport r = check_validity(bad);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.fail_step == bad.decisions[0].step_index);
}

TEST_CASE("k-agreement flags the earliest excess output") {
  Trace fake;
  fake.params = fig2(4, 1, 1);
  fake.decisions = {
      DecisionEvent{0, 1, 0, 10, DecisionKind::TDeciding},
      DecisionEvent{1, 1, 0, 12, DecisionKind::TDeciding},
      DecisionEvent{2, 1, 1, 15, DecisionKind::TDeciding},
      DecisionEvent{3, 1, 2, 20, DecisionKind::TDeciding},
  };
  PropertyReport r = check_k_agreement(fake, 1);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.fail_step == std::size_t{15});
}

TEST_CASE("termination check demands full survivor completion") {
  ProtocolParams p = fig2(3, 2, 2);
  Schedule s;
  s.kind = Schedule::Kind::EventuallyMBounded;
  s.seed = 7;
  s.prefix_len = 30;
  s.survivors = {0, 2};
  Trace tr = run(p, seeded_inputs(p, 7), s);
  CHECK(check_m_of_termination(tr, s).passed());
  Trace truncated = tr;
  truncated.truncated = true;
  CHECK(check_m_of_termination(truncated, s).verdict ==
        Verdict::Inconclusive);
  Schedule wrong = s;
  wrong.kind = Schedule::Kind::RoundRobin;
  CHECK_THROWS_AS(check_m_of_termination(tr, wrong), ConfigError);
}

TEST_CASE("adoption check ties adopted outputs to direct deciders") {
  ProtocolParams p3 = fig2(3, 2, 1);
  p3.protocol = Protocol::Fig3;
  p3.s_instances = 3;
  Trace tr = seeded_run(p3, 3);
  CHECK(check_adoption(tr).passed());
  Trace bad = tr;
  bad.decisions.push_back(
      DecisionEvent{0, 1, 2, 999, DecisionKind::HistoryAdopted});
  // Only a failure if nobody t-decided value 2 at instance 1.
  bool direct = false;
  for (const DecisionEvent& e : tr.decisions)
    if (e.kind == DecisionKind::TDeciding && e.instance == 1 && e.value == 2)
      direct = true;
  if (!direct) CHECK(check_adoption(bad).verdict == Verdict::Fail);
  CHECK_THROWS_AS(check_adoption(seeded_run(fig2(3, 2, 1), 0)), ConfigError);
}

TEST_CASE("identifier coherence monitor sees a forged split") {
  ProtocolParams p = fig2(3, 2, 1);
  Trace tr;
  tr.params = p;
  tr.initial = initial_configuration(p, seeded_inputs(p, 0));
  Step u1;
  u1.step_index = 0;
  u1.pid = 0;
  u1.primitive = Primitive::Update;
  u1.object = "A";
  u1.component = 0;
  u1.value_written = RegisterValue{IdPair{0, 7}};
  Step u2 = u1;
  u2.step_index = 1;
  u2.component = 1;
  u2.value_written = RegisterValue{IdPair{1, 7}};  // same id, other value
  tr.steps = {u1, u2};
  PropertyReport r = monitor_lemma2(tr);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.fail_step == std::size_t{1});
  // Overwriting the first copy first keeps the id coherent.
  Trace ok = tr;
  ok.steps[1].component = 0;
  CHECK(monitor_lemma2(ok).passed());
}

TEST_CASE("per-instance coherence monitor accepts honest repeated runs") {
  ProtocolParams p = fig2(4, 3, 2);
  p.protocol = Protocol::Fig3;
  p.s_instances = 2;
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    CHECK(monitor_lemma6(seeded_run(p, seed)).passed());
}

TEST_CASE("pivot monitor is inconclusive without enough deciders") {
  ProtocolParams p = fig2(4, 2, 1);
  Trace empty;
  empty.params = p;
  empty.initial = initial_configuration(p, seeded_inputs(p, 0));
  CHECK(monitor_lemma4(empty, p).verdict == Verdict::Inconclusive);
}

TEST_CASE("replay detects tampered observations") {
  ProtocolParams p = fig2(3, 2, 1);
  Trace tr = seeded_run(p, 5);
  Trace bad = tr;
  for (Step& s : bad.steps) {
    if (s.primitive == Primitive::Update) {
      s.value_written = RegisterValue{IdPair{99, 99}};
      break;
    }
  }
  PropertyReport r = replay(bad);
  CHECK(r.verdict == Verdict::Fail);
}

TEST_CASE("full runs touch every component the formula allots") {
  ProtocolParams p = fig2(4, 2, 1);
  Schedule s;
  s.kind = Schedule::Kind::RoundRobin;
  s.step_cap = 20000;
  Trace tr = run(p, seeded_inputs(p, 2), s);
  std::set<Cell> expected;
  for (int c = 0; c < p.components(); ++c) expected.insert(Cell{"A", c});
  CHECK(touched_cells(tr) == expected);
}

TEST_CASE("bounded search finds shortest witnesses and can exhaust") {
  ProtocolParams p = fig2(2, 1, 1);
  Configuration start = initial_configuration(p, {{1}, {0}});
  const auto decided = [](const Configuration& c) {
    return c.machines[0].status == Status::Halted;
  };
  SearchResult sr = bounded_search(p, start, {0}, {Thread::T1}, decided, 100);
  REQUIRE(sr.found);
  CHECK(sr.activations.size() == 7);  // invoke + 2r memory steps
  const auto never = [](const Configuration&) { return false; };
  SearchResult ex = bounded_search(p, start, {0}, {Thread::T1}, never, 100);
  CHECK_FALSE(ex.found);
  CHECK(ex.exhausted);
  SearchResult capped = bounded_search(p, start, {0}, {Thread::T1}, never, 2);
  CHECK_FALSE(capped.exhausted);
}

TEST_CASE("witness search outputs the whole value set") {
  ProtocolParams p = fig2(3, 2, 2);
  Lemma1Outcome one = lemma1_oracle(p, {1}, {2}, 1000);
  REQUIRE(one.found);
  CHECK(one.witness.decisions.size() == 1);
  CHECK(one.witness.decisions[0].value == 2);
  CHECK(replay(one.witness).passed());

  Lemma1Outcome two = lemma1_oracle(p, {0, 2}, {1, 2}, 10000);
  REQUIRE(two.found);
  std::set<Val> outs;
  for (const DecisionEvent& e : two.witness.decisions) outs.insert(e.value);
  CHECK(outs.count(1));
  CHECK(outs.count(2));
  for (const Step& s : two.witness.steps) {
    CHECK(s.pid != 1);  // only Q takes steps
  }
  CHECK_THROWS_AS(lemma1_oracle(p, {0, 0}, {1}, 10), ConfigError);
  CHECK_THROWS_AS(lemma1_oracle(p, {0}, {1, 2}, 10), ConfigError);
  CHECK_THROWS_AS(lemma1_oracle(p, {0}, {9}, 10), ConfigError);
}
