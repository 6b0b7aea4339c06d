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

#ifndef SETSPACE_COVERING_HPP_
#define SETSPACE_COVERING_HPP_

#include <string>
#include <vector>

#include "setspace/checks.hpp"
#include "setspace/engine.hpp"

namespace setspace {

/// Searches executions in which only Q takes steps, starting at D, for a
/// configuration where some q in Q is poised to write a cell outside A.
/// Escaped: the shortest such fragment. Otherwise every reachable
/// configuration keeps Q's poised writes inside A; `exhausted` says whether
/// the whole reachable space fit under the depth cap, which is what makes
/// "covered" a certificate rather than a timeout.
struct FragmentResult {
  bool escaped = false;
  bool exhausted = false;
  std::vector<Activation> fragment;
  Cell escape_cell;
  int poised_pid = -1;
  std::size_t explored = 0;
};

FragmentResult fragment_search(const ProtocolParams& params,
                               const Configuration& D,
                               const std::vector<int>& Q,
                               const std::vector<Cell>& A,
                               std::size_t depth_cap);

/// One stage of the covering construction: a fragment extending the
/// execution, the set P of processes left poised over the covered cells A,
/// the block write that discharges them, and the bracketing configurations.
struct CoveringStage {
  int stage = 0;
  std::vector<Activation> alpha;  // from the previous stage's end to D
  Configuration D;                // every Q-only execution from here stays in A
  std::vector<int> P;             // poised writers, one per cell of A
  std::vector<int> Q;             // the group left running at D
  std::vector<Cell> A;            // covered cells, in coverage order
  std::vector<Activation> beta;   // P's poised writes, in coverage order
  Configuration C_after;          // configuration after beta
};

struct CoveringResult {
  bool built = false;
  int stuck_stage = -1;
  std::string reason;
  Configuration initial;
  std::vector<CoveringStage> stages;  // stages 1 .. c-1
  int c = 0;                          // ceil((k+1)/m) groups overall
  int s = 0;                          // max instance consumed while building
};

/// Builds the staged covering with groups of m fresh processes, replacing
/// each newly poised writer by the lowest-index unused process. Inputs are
/// pid-valued, so proposals are pairwise distinct. Gets stuck when a
/// replacement process or coverage certificate is unavailable; protocols
/// with enough registers are expected to get stuck here.
CoveringResult build_covering(const ProtocolParams& params,
                              std::size_t depth_cap);

struct ObliterationReport {
  int stage = 0;
  bool ok = false;
  std::string explanation;
};

/// Exact-equality obliteration check: memory must match, and so must every
/// machine not in `group`.
bool obliteration_holds(const Configuration& with_gamma,
                        const Configuration& without_gamma,
                        const std::vector<int>& group, std::string* why);

/// Splices hidden group executions into the covering: after each alpha the
/// stage's group runs to instance s+1 deciding its own proposals, the block
/// write erases every trace of that run, and the poised writers themselves
/// decide one more batch of values at the end. Success is certified by
/// k-agreement failing on the replayed trace.
struct RefutationResult {
  bool found = false;
  std::string reason;
  Trace trace;
  int violation_instance = 0;  // s + 1
  std::set<Val> outputs_at_violation;
  std::vector<ObliterationReport> obliteration;
};

RefutationResult splice_and_refute(const ProtocolParams& params,
                                   const CoveringResult& covering,
                                   std::size_t depth_cap);

/// Adds one clone process to a recorded run of an anonymous protocol. The
/// clone shares pid `pid`'s input and repeats each of its steps immediately
/// after the original, up to but excluding the write recorded at step
/// `pause_at`, where it stays poised. ok=false flags lockstep divergence.
struct CloneReport {
  bool ok = false;
  std::string explanation;
  int original_pid = -1;
  int clone_pid = -1;
  std::size_t pause_at = 0;
  std::vector<Activation> activations;
  Trace trace;                 // the widened run
  Configuration final_config;
  std::optional<Cell> pending_cell;    // the clone's held-back write
  std::optional<RegisterValue> pending_value;
};

CloneReport clone_lockstep(const ProtocolParams& params, const Trace& trace,
                           int pid, std::size_t pause_at);

/// Releases the clone's held-back write as a one-step block write.
Configuration resume_clone(const ProtocolParams& params,
                           const CloneReport& clone,
                           const Configuration& config);

/// Glues isolated one-shot runs of disjoint value sets into one execution.
/// Each group runs alone on its own values; the runs must write the same
/// cell sequence R_1..R_L in first-write order. The glued executions
/// beta_0..beta_L interleave group prefixes, with clone block writes
/// restoring each group's view of R_1..R_{j-1} before it first writes R_j.
/// Blocked when the footprints differ or the world has too few processes
/// for the clones; the anonymous repeated protocol at its full register
/// budget is expected to block on the process budget.
struct GluedStage {
  int stage = 0;                     // j
  std::vector<Activation> beta;
  int outside_steppers = 0;          // clones taking steps in beta_j
};

struct GluedResult {
  bool built = false;
  int blocked_stage = -1;  // -1: validation or footprint phase
  std::string reason;
  ProtocolParams world;
  Configuration initial;
  std::vector<std::vector<int>> groups;
  std::vector<Cell> register_seq;               // R_1..R_L
  std::vector<std::vector<Activation>> alphas;  // per group, isolated
  std::vector<GluedStage> stages;               // beta_0..beta_L
  Trace final_trace;                            // replay of beta_L
  int clones_used = 0;
};

GluedResult build_glued(const ProtocolParams& params,
                        const std::vector<std::vector<Val>>& value_sets,
                        std::size_t depth_cap);

}  // namespace setspace

#endif  // SETSPACE_COVERING_HPP_
