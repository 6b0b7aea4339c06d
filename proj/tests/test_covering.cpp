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

#include "setspace/covering.hpp"

using namespace setspace;

namespace {

ProtocolParams toy_race() {
  ProtocolParams p;
  p.protocol = Protocol::ToyRace;
  p.n = 2;
  p.k = 1;
  p.m = 1;
  p.s_instances = 3;
  p.domain_size = 2;
  return p;
}

ProtocolParams anon_wwr(int n) {
  ProtocolParams p;
  p.protocol = Protocol::ToyAnonWwr;
  p.n = n;
  p.k = 1;
  p.m = 1;
  p.domain_size = 2;
  return p;
}

}  // namespace

TEST_CASE("fragment search escapes toward the uncovered register") {
  ProtocolParams p = toy_race();
  Configuration start = initial_configuration(p, pid_inputs(p));
  FragmentResult fr = fragment_search(p, start, {0}, {}, 1000);
  REQUIRE(fr.escaped);
  CHECK(fr.fragment.size() == 2);  // invoke + read, then poised to write
  CHECK(fr.poised_pid == 0);
  CHECK(fr.escape_cell == Cell{"C", Cell::kPlainRegister});
  // With the register covered, every reachable write stays inside it.
  FragmentResult covered =
      fragment_search(p, start, {0}, {fr.escape_cell}, 1000);
  CHECK_FALSE(covered.escaped);
  CHECK(covered.exhausted);
}

TEST_CASE("covering the under-provisioned toy fixture") {
  ProtocolParams p = toy_race();
  CoveringResult cov = build_covering(p, 10000);
  REQUIRE(cov.built);
  CHECK(cov.c == 2);
  REQUIRE(cov.stages.size() == 1);
  const CoveringStage& st = cov.stages[0];
  CHECK(st.A == std::vector<Cell>{Cell{"C", Cell::kPlainRegister}});
  CHECK(st.P == std::vector<int>{0});
  CHECK(st.Q == std::vector<int>{1});
  CHECK(st.P.size() == st.A.size());
  CHECK(st.beta.size() == 1);
  CHECK(cov.s == 1);
  // The block write installed P's held-back value.
  CHECK(read_register(st.C_after.mem, "C") == RegisterValue{ValueSeq{0}});
}

TEST_CASE("splice produces k+1 outputs in one instance and obliterates") {
  ProtocolParams p = toy_race();
  CoveringResult cov = build_covering(p, 10000);
  REQUIRE(cov.built);
  RefutationResult ref = splice_and_refute(p, cov, 10000);
  REQUIRE(ref.found);
  CHECK(ref.violation_instance == 2);
  CHECK(ref.outputs_at_violation == std::set<Val>{0, 1});
  CHECK(check_k_agreement(ref.trace, p.k).verdict == Verdict::Fail);
  CHECK(check_validity(ref.trace).passed());  // outputs are real proposals
  REQUIRE(ref.obliteration.size() == 1);
  CHECK(ref.obliteration[0].ok);
  CHECK(replay(ref.trace).passed());
}

TEST_CASE("the full-size identifier protocol resists the builder") {
  ProtocolParams p = toy_race();
  p.protocol = Protocol::Fig3;
  CoveringResult cov = build_covering(p, 10000);
  CHECK_FALSE(cov.built);
  CHECK(cov.stuck_stage == 1);
  CHECK(cov.reason.find("replacement") != std::string::npos);
}

TEST_CASE("clone runs in lockstep and holds back its write") {
  ProtocolParams p = anon_wwr(2);
  Schedule s;
  s.kind = Schedule::Kind::SeededRandom;
  s.seed = 12;
  Trace tr = run(p, {{0}, {1}}, s);
  // Find p0's first register write.
  std::size_t pause = tr.steps.size();
  for (const Step& st : tr.steps) {
    if (st.pid == 0 && st.primitive == Primitive::RegisterWrite &&
        st.object == "R1") {
      pause = st.step_index;
      break;
    }
  }
  REQUIRE(pause < tr.steps.size());
  CloneReport clone = clone_lockstep(p, tr, 0, pause);
  CHECK(clone.ok);
  CHECK(clone.clone_pid == 2);
  REQUIRE(clone.pending_cell.has_value());
  CHECK(*clone.pending_cell == Cell{"R1", Cell::kPlainRegister});
  CHECK(clone.pending_value == RegisterValue{Val{0}});
  // Overwrite R1, then let the clone restore it.
  Configuration dirty = clone.final_config;
  write_register_in_place(dirty.mem, "R1", RegisterValue{Val{1}});
  Configuration restored = resume_clone(p, clone, dirty);
  CHECK(read_register(restored.mem, "R1") == RegisterValue{Val{0}});

  CHECK_THROWS_AS(clone_lockstep(p, tr, 1, pause), ConfigError);
  ProtocolParams ids = toy_race();
  Trace idtr = run(ids, pid_inputs(ids), s);
  CHECK_THROWS_AS(clone_lockstep(ids, idtr, 0, 0), ConfigError);
}

TEST_CASE("gluing two write-write-read runs splits consensus") {
  ProtocolParams p = anon_wwr(4);
  GluedResult g = build_glued(p, {{0}, {1}}, 10000);
  REQUIRE(g.built);
  REQUIRE(g.register_seq.size() == 2);
  CHECK(g.register_seq[0] == Cell{"R1", Cell::kPlainRegister});
  CHECK(g.register_seq[1] == Cell{"R2", Cell::kPlainRegister});
  CHECK(g.clones_used == 2);
  REQUIRE(g.stages.size() == 3);  // beta_0, beta_1, beta_2
  CHECK(g.stages[0].outside_steppers == 0);
  CHECK(g.stages[1].outside_steppers == 0);
  CHECK(g.stages[2].outside_steppers == 2);
  PropertyReport agreement = check_k_agreement(g.final_trace, p.k);
  CHECK(agreement.verdict == Verdict::Fail);
  CHECK(check_validity(g.final_trace).passed());
}

TEST_CASE("gluing blocks without processes to spend on clones") {
  ProtocolParams p = anon_wwr(3);
  GluedResult g = build_glued(p, {{0}, {1}}, 10000);
  CHECK_FALSE(g.built);
  CHECK(g.reason.find("process budget") != std::string::npos);
}

TEST_CASE("one-register runs glue with no clones at all") {
  ProtocolParams p;
  p.protocol = Protocol::ToyAnonRace;
  p.n = 2;
  p.k = 1;
  p.m = 1;
  p.domain_size = 2;
  GluedResult g = build_glued(p, {{0}, {1}}, 10000);
  REQUIRE(g.built);
  CHECK(g.register_seq.size() == 1);
  CHECK(g.clones_used == 0);
  CHECK(check_k_agreement(g.final_trace, p.k).verdict == Verdict::Fail);
}

TEST_CASE("the anonymous protocol at full size blocks on the clone budget") {
  ProtocolParams p;
  p.protocol = Protocol::Fig4;
  p.n = 4;
  p.k = 2;
  p.m = 1;
  p.domain_size = 3;
  GluedResult g = build_glued(p, {{0}, {1}, {2}}, 100000);
  CHECK_FALSE(g.built);
  CHECK(g.reason.find("process budget") != std::string::npos);
}

TEST_CASE("obliteration helper compares exactly") {
  ProtocolParams p = toy_race();
  Configuration a = initial_configuration(p, pid_inputs(p));
  Configuration b = a;
  std::string why;
  CHECK(obliteration_holds(a, b, {}, &why));
  apply_activation(p, b, Activation{1, Thread::T1}, 0);
  CHECK_FALSE(obliteration_holds(a, b, {}, &why));
  CHECK(obliteration_holds(a, b, {1}, &why));  // machine hidden, memory same
  apply_activation(p, b, Activation{1, Thread::T1}, 0);
  apply_activation(p, b, Activation{1, Thread::T1}, 0);  // writes C
  CHECK_FALSE(obliteration_holds(a, b, {1}, &why));
  CHECK(why.find("memory") != std::string::npos);
}
