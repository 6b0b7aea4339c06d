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

#ifndef SETSPACE_CHECKS_HPP_
#define SETSPACE_CHECKS_HPP_

#include <functional>
#include <map>
#include <set>
#include <string>

#include "setspace/engine.hpp"

namespace setspace {

enum class Verdict { Pass, Fail, Inconclusive };

const char* verdict_name(Verdict v);

struct PropertyReport {
  std::string property;
  Verdict verdict = Verdict::Pass;
  std::optional<std::size_t> fail_step;  // earliest violating step
  std::string explanation;
  std::map<int, std::set<Val>> inputs_per_instance;   // In_t
  std::map<int, std::set<Val>> outputs_per_instance;  // Out_t

  bool passed() const { return verdict == Verdict::Pass; }
};

/// Out_t subset of In_t, per instance.
PropertyReport check_validity(const Trace& trace);

/// |Out_t| <= k, per instance.
PropertyReport check_k_agreement(const Trace& trace, int k);

/// Every survivor of an eventually-m-bounded schedule completed all of its
/// invoked operations. Inconclusive on truncated traces.
PropertyReport check_m_of_termination(const Trace& trace,
                                      const Schedule& schedule);

/// Repeated protocols: every output not produced on the t-deciding branch
/// equals some t-deciding process's output for the same instance.
PropertyReport check_adoption(const Trace& trace);

/// FIG2: in every reachable configuration, all pairs in A with the same
/// identifier carry the same value.
PropertyReport monitor_lemma2(const Trace& trace);

/// FIG3: the per-instance variant; all t-tuples with the same identifier are
/// identical.
PropertyReport monitor_lemma6(const Trace& trace);

/// FIG2: once the (n-l+1)-th decider has performed its final scan, pairs
/// with values outside that scan's value set V never occupy two components,
/// and later deciders output values in V. Inconclusive when fewer than
/// n-l+1 processes decide.
PropertyReport monitor_lemma4(const Trace& trace, const ProtocolParams& params);

/// Re-executes the trace's steps from its initial configuration and checks
/// every recorded observation is reproduced.
PropertyReport replay(const Trace& trace);

/// Cells touched (read or written) by the trace's shared-memory steps.
std::set<Cell> touched_cells(const Trace& trace);

/// Bounded breadth-first search over group-only activations. Visits
/// configurations at most once; the path returned is a shortest one.
struct SearchResult {
  bool found = false;
  std::vector<Activation> activations;
  std::size_t explored = 0;
  bool exhausted = false;  // whole reachable space within depth_cap seen
};

SearchResult bounded_search(
    const ProtocolParams& params, const Configuration& start,
    const std::vector<int>& group, const std::vector<Thread>& threads,
    const std::function<bool(const Configuration&)>& goal,
    std::size_t depth_cap);

/// Witness search for the m-value execution lemma: an execution in which
/// only processes in Q take steps and every value of V is output, with each
/// q assigned a distinct input from V. NotFound is a bounded-search outcome,
/// not a refutation.
struct Lemma1Outcome {
  bool found = false;
  Trace witness;
  std::size_t explored = 0;
};

Lemma1Outcome lemma1_oracle(const ProtocolParams& params, std::vector<int> Q,
                            std::vector<Val> V, std::size_t depth_cap);

}  // namespace setspace

#endif  // SETSPACE_CHECKS_HPP_
