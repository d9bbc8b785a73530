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
#include "stepbmc/condition.hpp"

#include <algorithm>
#include <set>

#include "stepbmc/common.hpp"
#include "stepbmc/ltl.hpp"

namespace stepbmc {

ConditionPtr Condition::atom(std::string place) {
  return ConditionPtr(new Condition(CondOp::atom, std::move(place), {}, {}));
}
ConditionPtr Condition::neg(ConditionPtr c) {
  return ConditionPtr(new Condition(CondOp::neg, {}, std::move(c), {}));
}
ConditionPtr Condition::lor(ConditionPtr a, ConditionPtr b) {
  return ConditionPtr(new Condition(CondOp::lor, {}, std::move(a), std::move(b)));
}
ConditionPtr Condition::land(ConditionPtr a, ConditionPtr b) {
  return ConditionPtr(new Condition(CondOp::land, {}, std::move(a), std::move(b)));
}

namespace {

int cond_prec(CondOp op) {
  switch (op) {
    case CondOp::atom:
      return 5;
    case CondOp::neg:
      return 4;
    case CondOp::land:
      return 3;
    case CondOp::lor:
      return 2;
  }
  return 0;
}

void cond_print(const Condition& c, std::string& out) {
  auto child = [&out](const ConditionPtr& k, int min_prec) {
    bool parens = cond_prec(k->op()) < min_prec;
    if (parens) out += '(';
    cond_print(*k, out);
    if (parens) out += ')';
  };
  switch (c.op()) {
    case CondOp::atom:
      out += c.name();
      break;
    case CondOp::neg:
      out += '!';
      child(c.lhs(), 4);
      break;
    case CondOp::land:
      child(c.lhs(), 3);
      out += " & ";
      child(c.rhs(), 4);
      break;
    case CondOp::lor:
      child(c.lhs(), 2);
      out += " | ";
      child(c.rhs(), 3);
      break;
  }
}

ConditionPtr from_formula(const FormulaPtr& f) {
  switch (f->op()) {
    case LtlOp::atom:
      return Condition::atom(f->name());
    case LtlOp::neg:
      return Condition::neg(from_formula(f->lhs()));
    case LtlOp::land:
      return Condition::land(from_formula(f->lhs()), from_formula(f->rhs()));
    case LtlOp::lor:
      return Condition::lor(from_formula(f->lhs()), from_formula(f->rhs()));
    case LtlOp::top:
    case LtlOp::bot:
      throw ParseError("true/false are not allowed in a condition", 1, 0);
    case LtlOp::until:
    case LtlOp::release:
      throw ParseError("temporal operators are not allowed in a condition", 1, 0);
  }
  throw DomainError("unreachable condition op");
}

}  // namespace

std::string Condition::to_text() const {
  std::string out;
  cond_print(*this, out);
  return out;
}

ConditionPtr parse_condition(const std::string& text) {
  return from_formula(parse_formula(text));
}

std::vector<std::string> atoms_of(const ConditionPtr& c) {
  std::set<std::string> names;
  std::vector<const Condition*> stack{c.get()};
  while (!stack.empty()) {
    const Condition* n = stack.back();
    stack.pop_back();
    if (!n) continue;
    if (n->op() == CondOp::atom) names.insert(n->name());
    stack.push_back(n->lhs().get());
    stack.push_back(n->rhs().get());
  }
  return {names.begin(), names.end()};
}

namespace {

bool eval_cond(const Condition* c, const Net& net, const Marking& m) {
  switch (c->op()) {
    case CondOp::atom: {
      int p = net.place_index(c->name());
      if (p < 0) throw DomainError("condition mentions unknown place '" + c->name() + "'");
      return m.test(std::size_t(p));
    }
    case CondOp::neg:
      return !eval_cond(c->lhs().get(), net, m);
    case CondOp::land:
      return eval_cond(c->lhs().get(), net, m) && eval_cond(c->rhs().get(), net, m);
    case CondOp::lor:
      return eval_cond(c->lhs().get(), net, m) || eval_cond(c->rhs().get(), net, m);
  }
  throw DomainError("unreachable condition op");
}

}  // namespace

bool eval_condition(const ConditionPtr& c, const Net& net, const Marking& m) {
  if (!c) throw DomainError("cannot evaluate a null condition");
  return eval_cond(c.get(), net, m);
}

ConditionPtr exact_marking_condition(const Net& net, const Marking& m) {
  if (net.nplaces() == 0) throw DomainError("net has no places");
  ConditionPtr acc;
  for (std::size_t p = 0; p < net.nplaces(); ++p) {
    ConditionPtr lit = Condition::atom(net.places[p]);
    if (!m.test(p)) lit = Condition::neg(std::move(lit));
    acc = acc ? Condition::land(std::move(acc), std::move(lit)) : std::move(lit);
  }
  return acc;
}

namespace {

enum class Tri { no, unknown, yes };

// Three-valued evaluation under a partial marking: places below `defined`
// have their bit fixed, the rest are open.
Tri eval3(const Condition* c, const Net& net, const Marking& bits, std::size_t defined) {
  switch (c->op()) {
    case CondOp::atom: {
      int p = net.place_index(c->name());
      if (p < 0) throw DomainError("condition mentions unknown place '" + c->name() + "'");
      if (std::size_t(p) >= defined) return Tri::unknown;
      return bits.test(std::size_t(p)) ? Tri::yes : Tri::no;
    }
    case CondOp::neg: {
      Tri v = eval3(c->lhs().get(), net, bits, defined);
      if (v == Tri::unknown) return v;
      return v == Tri::yes ? Tri::no : Tri::yes;
    }
    case CondOp::land: {
      Tri a = eval3(c->lhs().get(), net, bits, defined);
      if (a == Tri::no) return Tri::no;
      Tri b = eval3(c->rhs().get(), net, bits, defined);
      if (b == Tri::no) return Tri::no;
      return a == Tri::yes && b == Tri::yes ? Tri::yes : Tri::unknown;
    }
    case CondOp::lor: {
      Tri a = eval3(c->lhs().get(), net, bits, defined);
      if (a == Tri::yes) return Tri::yes;
      Tri b = eval3(c->rhs().get(), net, bits, defined);
      if (b == Tri::yes) return Tri::yes;
      return a == Tri::no && b == Tri::no ? Tri::no : Tri::unknown;
    }
  }
  throw DomainError("unreachable condition op");
}

struct SatSearch {
  const Net& net;
  const Condition* cond;
  std::size_t budget;
  SatisfyingSet out;
  Marking bits;

  // Returns false when the budget ran out.
  bool walk(std::size_t d, bool decided_true) {
    if (out.explored++ >= budget) return false;
    if (!decided_true) {
      Tri v = eval3(cond, net, bits, d);
      if (v == Tri::no) return true;
      decided_true = v == Tri::yes;
    }
    if (d == net.nplaces()) {
      out.markings.push_back(bits);
      return true;
    }
    bits.reset(d);
    if (!walk(d + 1, decided_true)) return false;
    bits.set(d);
    if (!walk(d + 1, decided_true)) return false;
    bits.reset(d);
    return true;
  }
};

}  // namespace

SatisfyingSet satisfying_markings(const Net& net, const ConditionPtr& c,
                                  std::size_t node_budget) {
  if (!c) throw DomainError("cannot enumerate a null condition");
  SatSearch s{net, c.get(), node_budget, {}, Marking(net.nplaces())};
  s.out.exhaustive = s.walk(0, false);
  return s.out;
}

}  // namespace stepbmc
