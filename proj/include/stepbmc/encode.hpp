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
// Translations from bounded net problems to ground programs, and decoding of
// stable models back into executions. Rule emission order is deterministic
// and documented per function; dumped programs are byte-stable.
#ifndef STEPBMC_ENCODE_HPP_
#define STEPBMC_ENCODE_HPP_

#include <cstddef>
#include <optional>

#include "stepbmc/asp.hpp"
#include "stepbmc/condition.hpp"
#include "stepbmc/ltl.hpp"
#include "stepbmc/net.hpp"

namespace stepbmc {

// The execution program for bound n >= 1. Emits, in order: one initial
// choice {p(0)} per place; transition choice rules {t(i)} <- preset(i)
// (transition-major, time-minor); effect rules p(i+1) <- t(i) (place-major,
// producer-minor, time-minor); conflict rules <- 2 {consumers of p at i} for
// places with at least two consumers (duplicates dropped, first place wins);
// frame rules p(i+1) <- p(i), not consumers(i); idle definitions
// idle(i) <- not t(i) for all t; idle ordering constraints
// <- idle(i+1), not idle(i). Bodies list places and transitions in
// declaration order. Throws DomainError when n < 1.
GroundProgram encode_executions(const Net& net, int n);

// Rules forcing condition c to hold at time i: the constraint
// <- not <root>(i) first, then one definition group per non-atomic node in
// descending node id order. Node ids are assigned by post-order over the
// condition tree (every node counts, atoms included); atomic nodes
// contribute the place atom itself instead of a definition. Throws
// DomainError when c mentions a place the net does not declare or i < 0.
GroundProgram encode_condition(const ConditionPtr& c, int i, const Net& net);

// One rule live <- preset(n) per distinct transition preset, in transition
// declaration order (duplicates dropped). encode_deadlock appends <- live.
GroundProgram encode_live(const Net& net, int n);
GroundProgram encode_deadlock(const Net& net, int n);

// Transitions whose firing changes some place named in f, in declaration
// order.
std::vector<int> visible_transitions(const FormulaPtr& f, const Net& net);

// The counterexample program for f (positive normal form, checked) and bound
// n >= 1. Emits the loop machinery first: choices {el(i)}; the guess-check
// conflict over el(0..n-1) when n >= 2; per-time, per-place loop equality
// constraints; per-time le/nl/il rules; the idle-loop constraint
// <- le, idle(n-1); per-time conflicts over the visible transitions when at
// least two are visible. Then per-subformula evaluation rules in ascending
// node id order (post-order over the formula tree, no subtree sharing), and
// finally <- not <root>(0). An atom directly under a negation is absorbed by
// the negation node and gets no rules of its own.
GroundProgram encode_ltl(const FormulaPtr& f, const Net& net, int n);

// n conflict rules <- 2 {all transitions at i}; the empty program when the
// net has fewer than two transitions.
GroundProgram encode_interleaving(const Net& net, int n);

// Drops rules over place/transition atoms that cannot be reached from the
// declared initial marking by time-staged forward closure: p(0) exists only
// for initially marked places; t(i) exists when its whole preset exists at
// i; p(i+1) exists when p(i) does or some producer t(i) does. Rules with an
// absent head or absent positive body atom are dropped, absent negative
// literals are removed, conflict rules keep their existing atoms and are
// dropped below two. Sound only when the accompanying initial condition
// pins exactly the declared initial marking.
GroundProgram stage_atoms(const GroundProgram& p, const Net& net, int n);

// The execution M_i = {p : p(i) in delta}, S_i = {t : t(i) in delta} for a
// model of a program containing encode_executions(net, n). Every step is
// replayed against the net; a mismatch throws VerificationError (defense
// against solver and encoding bugs).
StepExecution decode_execution(const StableModel& delta, const Net& net, int n);

// A decoded counterexample. Loop: the execution visits markings[l] again as
// the final marking and loops forever through l+1..n. Deadlock: the final
// marking enables nothing. NonMaximal: the execution is a prefix certificate;
// every maximal continuation satisfies the formula.
struct Counterexample {
  enum class Shape { loop, deadlock, non_maximal };
  StepExecution execution;
  Shape shape = Shape::deadlock;
  std::optional<std::size_t> loop;  // set iff shape == loop
};

// Shape selection: Loop(l) iff nl(l+1) in delta; Deadlock iff no nl atom and
// live absent; NonMaximal iff no nl atom and live present. Verifies the loop
// side conditions (le present, il(l+1..n) present, markings[l] equals the
// final marking, last step nonempty) and that live agrees with the final
// marking; throws VerificationError on any violation.
Counterexample decode_counterexample(const StableModel& delta, const Net& net,
                                     int n);

}  // namespace stepbmc

#endif  // STEPBMC_ENCODE_HPP_
