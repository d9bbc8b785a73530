/* Copyright 2026 the stepbmc authors
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
#ifndef STEPBMC_NET_HPP_
#define STEPBMC_NET_HPP_

#include <boost/dynamic_bitset.hpp>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stepbmc/ltl.hpp"

namespace stepbmc {

class Condition;
using ConditionPtr = std::shared_ptr<const Condition>;

// A marking of a 1-safe net: one bit per place, indexed by declaration order.
using Marking = boost::dynamic_bitset<>;

struct MarkingHash {
  std::size_t operator()(const Marking& m) const;
};

enum class Semantics { step, interleaving };

// A place/transition net with its initial marking. Presets and postsets are
// stored as place bitsets per transition. Invariants (enforced by validate):
// identifiers unique across places and transitions together, every transition
// has nonempty preset and postset, and no identifier collides with the
// encoder's reserved names (idle, el, le, nl, il, live, or a leading '_').
struct Net {
  std::vector<std::string> places;
  std::vector<std::string> transitions;
  std::vector<Marking> pre, post;  // indexed by transition
  Marking initial;

  std::size_t nplaces() const { return places.size(); }
  std::size_t ntransitions() const { return transitions.size(); }
  // -1 when the name is not declared.
  int place_index(const std::string& name) const;
  int transition_index(const std::string& name) const;
  // Throws DomainError on an unknown place name.
  Marking marking_of(const std::vector<std::string>& names) const;
  // Marked place names, sorted lexicographically (canonical report order).
  std::vector<std::string> place_names(const Marking& m) const;

  // Checks all structural invariants and builds the name indices.
  // Producers call this once after filling the fields.
  void validate();

 private:
  std::map<std::string, int> pidx_, tidx_;
};

// Line-oriented net description: `place <id>`, `trans <id>`,
// `arc <a> <b>` (direction inferred from the kinds of a and b),
// `init <place-id>`; `#` starts a comment. Throws ParseError.
Net parse_net(const std::string& text);

// Renders a net in the same format; parse_net(net_to_text(n)) reproduces n.
std::string net_to_text(const Net& net);
void write_net_file(const Net& net, const std::string& path);

bool enabled(const Net& net, const Marking& m, int t);
// All enabled transitions in declaration order.
std::vector<int> enabled_set(const Net& net, const Marking& m);
// (m minus preset) union postset. Throws DomainError when t is not enabled.
Marking fire(const Net& net, const Marking& m, int t);
// Every member enabled and presets pairwise disjoint; duplicates collapse.
bool is_step(const Net& net, const Marking& m, const std::vector<int>& step);
// Fires all members at once; the empty step returns m unchanged.
// Throws DomainError when is_step fails.
Marking fire_step(const Net& net, const Marking& m, const std::vector<int>& step);
bool deadlocked(const Net& net, const Marking& m);

// An execution M0 -S0-> M1 ... -S(k-1)-> Mk. Steps hold transition indices,
// sorted ascending; empty steps are valid (the marking repeats).
struct StepExecution {
  std::vector<Marking> markings;
  std::vector<std::vector<int>> steps;

  std::size_t length() const { return steps.size(); }
};

// Exhaustive interleaving reachability audit. `violation` reports the first
// firing that would put a second token on a place, with the path leading to
// it; `inconclusive` means state_limit distinct markings were visited first.
struct OneSafeReport {
  enum class Status { one_safe, violation, inconclusive };
  Status status = Status::inconclusive;
  std::size_t reachable_count = 0;
  std::optional<StepExecution> witness;  // path to the violating marking
  int witness_transition = -1;           // the firing that would double-mark
};

OneSafeReport assert_one_safe(const Net& net, std::size_t state_limit = 1 << 20,
                              const std::optional<Marking>& from = {});

// Breadth-first bounded search used as the independent truth oracle for the
// encoder. Initial layer: every marking satisfying `initial`. Finds a
// shortest execution of length <= bound ending in a goal marking. Visited
// markings are deduplicated; step semantics enumerates every preset-disjoint
// enabled subset, interleaving only singletons, both in declaration order.
struct SearchOutcome {
  enum class Status { found, absent, budget_exceeded };
  Status status = Status::absent;
  std::optional<StepExecution> execution;
  std::size_t explored = 0;
};

SearchOutcome oracle_search(const Net& net, const ConditionPtr& initial,
                            const std::function<bool(const Marking&)>& goal,
                            std::size_t bound, Semantics semantics,
                            std::size_t node_budget = 1 << 22);

// Depth-first enumeration of interleaving executions of length <= bound from
// a marking satisfying `initial` (default: exactly the declared initial
// marking), looking for one that refutes nothing: a deadlocked execution
// whose finite word satisfies f, or a looping execution (markings[l] equals
// the final marking) whose lasso word satisfies f. Words restrict markings to
// the atoms of f. `loop` absent in the witness means the deadlock shape.
// Requires f in positive normal form and bound >= 1.
struct LtlWitness {
  StepExecution execution;
  std::optional<std::size_t> loop;
};

struct LtlOracleOutcome {
  enum class Status { found, absent, budget_exceeded };
  Status status = Status::absent;
  std::optional<LtlWitness> witness;
  std::size_t explored = 0;
};

LtlOracleOutcome oracle_ltl_counterexample(
    const Net& net, const FormulaPtr& f, std::size_t bound,
    const std::optional<ConditionPtr>& initial = {},
    std::size_t node_budget = 1 << 22);

// The k-philosopher benchmark net: per philosopher i, places think_i, hasL_i,
// eat_i, fork_i and transitions takeL_i (think_i, fork_i -> hasL_i), takeR_i
// (hasL_i, fork_(i+1 mod k) -> eat_i), release_i (eat_i -> think_i, fork_i,
// fork_(i+1 mod k)); initially everyone thinks and every fork is free.
// Requires k >= 2.
Net dining_philosophers(std::size_t k);

}  // namespace stepbmc

#endif  // STEPBMC_NET_HPP_
