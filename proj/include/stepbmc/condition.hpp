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
#ifndef STEPBMC_CONDITION_HPP_
#define STEPBMC_CONDITION_HPP_

#include <memory>
#include <string>
#include <vector>

#include "stepbmc/net.hpp"

namespace stepbmc {

// A Boolean expression over place atoms with negation, disjunction and
// conjunction. Used for initial and target marking constraints.

enum class CondOp { atom, neg, lor, land };

class Condition {
 public:
  static ConditionPtr atom(std::string place);
  static ConditionPtr neg(ConditionPtr c);
  static ConditionPtr lor(ConditionPtr a, ConditionPtr b);
  static ConditionPtr land(ConditionPtr a, ConditionPtr b);

  CondOp op() const { return op_; }
  const std::string& name() const { return name_; }
  const ConditionPtr& lhs() const { return lhs_; }
  const ConditionPtr& rhs() const { return rhs_; }

  std::string to_text() const;

 private:
  Condition(CondOp op, std::string name, ConditionPtr lhs, ConditionPtr rhs)
      : op_(op), name_(std::move(name)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
  CondOp op_;
  std::string name_;
  ConditionPtr lhs_, rhs_;
};

// Same concrete syntax as formulas, restricted to !, &, |, -> and atoms.
// Temporal operators and the constants true/false are rejected.
ConditionPtr parse_condition(const std::string& text);

// Sorted distinct place names occurring in c.
std::vector<std::string> atoms_of(const ConditionPtr& c);

// Throws DomainError when c mentions a place the net does not declare.
bool eval_condition(const ConditionPtr& c, const Net& net, const Marking& m);

// The conjunction, in place declaration order, of p for marked places and
// !p for unmarked ones; satisfied by exactly the given marking.
ConditionPtr exact_marking_condition(const Net& net, const Marking& m);

// All markings satisfying c, in ascending order with the first declared
// place as the most significant bit. The search prunes subtrees whose
// partial assignment already decides c; `exhaustive` is false when the node
// budget ran out before the space was covered.
struct SatisfyingSet {
  std::vector<Marking> markings;
  bool exhaustive = true;
  std::size_t explored = 0;
};

SatisfyingSet satisfying_markings(const Net& net, const ConditionPtr& c,
                                  std::size_t node_budget = 1 << 22);

}  // namespace stepbmc

#endif  // STEPBMC_CONDITION_HPP_
