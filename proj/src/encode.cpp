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
#include "stepbmc/encode.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "stepbmc/common.hpp"

namespace stepbmc {

namespace {

void require_bound(int n) {
  if (n < 1) throw DomainError("the encoding needs a bound of at least 1");
}

std::vector<Atom> preset_atoms(const Net& net, int t, int i) {
  std::vector<Atom> out;
  for (std::size_t p = 0; p < net.nplaces(); ++p)
    if (net.pre[t][p]) out.push_back(Atom::place(net.places[p], i));
  return out;
}

// Transitions consuming from p, in declaration order.
std::vector<int> consumers(const Net& net, std::size_t p) {
  std::vector<int> out;
  for (std::size_t t = 0; t < net.ntransitions(); ++t)
    if (net.pre[t][p]) out.push_back(int(t));
  return out;
}

}  // namespace

GroundProgram encode_executions(const Net& net, int n) {
  require_bound(n);
  GroundProgram prog;
  for (const auto& p : net.places) prog.add(Rule::choice(Atom::place(p, 0)));
  for (std::size_t t = 0; t < net.ntransitions(); ++t)
    for (int i = 0; i < n; ++i)
      prog.add(Rule::choice(Atom::trans(net.transitions[t], i),
                            preset_atoms(net, int(t), i)));
  for (std::size_t p = 0; p < net.nplaces(); ++p)
    for (std::size_t t = 0; t < net.ntransitions(); ++t)
      if (net.post[t][p])
        for (int i = 0; i < n; ++i)
          prog.add(Rule::normal(Atom::place(net.places[p], i + 1),
                                {Atom::trans(net.transitions[t], i)}));
  std::set<std::vector<int>> conflict_seen;
  for (std::size_t p = 0; p < net.nplaces(); ++p) {
    std::vector<int> cons = consumers(net, p);
    if (cons.size() < 2 || !conflict_seen.insert(cons).second) continue;
    for (int i = 0; i < n; ++i) {
      std::vector<Atom> atoms;
      for (int t : cons) atoms.push_back(Atom::trans(net.transitions[t], i));
      prog.add(Rule::conflict(std::move(atoms)));
    }
  }
  for (std::size_t p = 0; p < net.nplaces(); ++p) {
    std::vector<int> cons = consumers(net, p);
    for (int i = 0; i < n; ++i) {
      std::vector<Atom> neg;
      for (int t : cons) neg.push_back(Atom::trans(net.transitions[t], i));
      prog.add(Rule::normal(Atom::place(net.places[p], i + 1),
                            {Atom::place(net.places[p], i)}, std::move(neg)));
    }
  }
  for (int i = 0; i < n; ++i) {
    std::vector<Atom> neg;
    for (const auto& t : net.transitions) neg.push_back(Atom::trans(t, i));
    prog.add(Rule::normal(Atom::idle(i), {}, std::move(neg)));
  }
  for (int i = 0; i < n; ++i)
    prog.add(Rule::constraint({Atom::idle(i + 1)}, {Atom::idle(i)}));
  return prog;
}

// --- conditions ----------------------------------------------------------------

namespace {

struct CondOcc {
  const Condition* node;
  int id = 0;
  CondOcc* lhs = nullptr;
  CondOcc* rhs = nullptr;
};

// Post-order ids over tree positions; a pointer-shared subtree occurring
// twice gets two ids.
CondOcc* build_cond(const ConditionPtr& c, std::deque<CondOcc>& pool, int& next,
                    const Net& net) {
  if (!c) return nullptr;
  CondOcc* l = build_cond(c->lhs(), pool, next, net);
  CondOcc* r = build_cond(c->rhs(), pool, next, net);
  if (c->op() == CondOp::atom && net.place_index(c->name()) < 0)
    throw DomainError("condition mentions unknown place '" + c->name() + "'");
  pool.push_back(CondOcc{c.get(), ++next, l, r});
  return &pool.back();
}

Atom cond_ref(const CondOcc* occ, int i) {
  if (occ->node->op() == CondOp::atom) return Atom::place(occ->node->name(), i);
  return Atom::cond(occ->id, i);
}

// Definitions in descending id order: the node itself, then the right
// subtree, then the left.
void emit_cond(const CondOcc* occ, int i, GroundProgram& prog) {
  if (!occ) return;
  switch (occ->node->op()) {
    case CondOp::atom:
      break;
    case CondOp::neg:
      prog.add(Rule::normal(Atom::cond(occ->id, i), {}, {cond_ref(occ->lhs, i)}));
      break;
    case CondOp::land:
      prog.add(Rule::normal(Atom::cond(occ->id, i),
                            {cond_ref(occ->lhs, i), cond_ref(occ->rhs, i)}));
      break;
    case CondOp::lor:
      prog.add(Rule::normal(Atom::cond(occ->id, i), {cond_ref(occ->lhs, i)}));
      prog.add(Rule::normal(Atom::cond(occ->id, i), {cond_ref(occ->rhs, i)}));
      break;
  }
  emit_cond(occ->rhs, i, prog);
  emit_cond(occ->lhs, i, prog);
}

}  // namespace

GroundProgram encode_condition(const ConditionPtr& c, int i, const Net& net) {
  if (!c) throw DomainError("cannot encode a null condition");
  if (i < 0) throw DomainError("condition time must be nonnegative");
  std::deque<CondOcc> pool;
  int next = 0;
  CondOcc* root = build_cond(c, pool, next, net);
  GroundProgram prog;
  prog.add(Rule::constraint({}, {cond_ref(root, i)}));
  emit_cond(root, i, prog);
  return prog;
}

// --- deadlock ------------------------------------------------------------------

GroundProgram encode_live(const Net& net, int n) {
  require_bound(n);
  GroundProgram prog;
  std::set<Marking> seen;
  for (std::size_t t = 0; t < net.ntransitions(); ++t) {
    if (!seen.insert(net.pre[t]).second) continue;
    prog.add(Rule::normal(Atom::live(), preset_atoms(net, int(t), n)));
  }
  return prog;
}

GroundProgram encode_deadlock(const Net& net, int n) {
  GroundProgram prog = encode_live(net, n);
  prog.add(Rule::constraint({Atom::live()}));
  return prog;
}

// --- LTL -----------------------------------------------------------------------

std::vector<int> visible_transitions(const FormulaPtr& f, const Net& net) {
  if (!f) throw DomainError("cannot inspect a null formula");
  std::vector<int> places;
  for (const std::string& name : atoms_of(f)) {
    int p = net.place_index(name);
    if (p < 0) throw DomainError("formula mentions unknown place '" + name + "'");
    places.push_back(p);
  }
  std::vector<int> out;
  for (std::size_t t = 0; t < net.ntransitions(); ++t)
    for (int p : places)
      if (net.pre[t][p] != net.post[t][p]) {
        out.push_back(int(t));
        break;
      }
  return out;
}

namespace {

struct FormOcc {
  const Formula* node;
  int id = 0;
  FormOcc* lhs = nullptr;
  FormOcc* rhs = nullptr;
  bool absorbed = false;  // atom under a negation; the parent owns the rules
};

FormOcc* build_form(const FormulaPtr& f, std::deque<FormOcc>& pool, int& next,
                    const Net& net) {
  if (!f) return nullptr;
  FormOcc* l = build_form(f->lhs(), pool, next, net);
  FormOcc* r = build_form(f->rhs(), pool, next, net);
  if (f->op() == LtlOp::atom && net.place_index(f->name()) < 0)
    throw DomainError("formula mentions unknown place '" + f->name() + "'");
  pool.push_back(FormOcc{f.get(), ++next, l, r});
  FormOcc* self = &pool.back();
  if (f->op() == LtlOp::neg) l->absorbed = true;
  return self;
}

// Evaluation rules per node, children first (ascending id order).
void emit_form(const FormOcc* occ, int n, GroundProgram& prog) {
  if (!occ) return;
  emit_form(occ->lhs, n, prog);
  emit_form(occ->rhs, n, prog);
  if (occ->absorbed) return;
  const int k = occ->id;
  auto sub = [](const FormOcc* o, int i) { return Atom::sub(o->id, i); };
  // The value of the suffix starting one past i: the successor inside the
  // window, or the loop successor atom at the window's end.
  auto next_ref = [&](int i) { return i < n ? Atom::sub(k, i + 1) : Atom::nextval(k); };
  switch (occ->node->op()) {
    case LtlOp::top:
      for (int i = 0; i <= n; ++i) prog.add(Rule::fact(Atom::sub(k, i)));
      break;
    case LtlOp::bot:
      break;  // never derivable
    case LtlOp::atom:
      for (int i = 0; i <= n; ++i)
        prog.add(Rule::normal(Atom::sub(k, i), {Atom::place(occ->node->name(), i)}));
      break;
    case LtlOp::neg:
      for (int i = 0; i <= n; ++i)
        prog.add(Rule::normal(Atom::sub(k, i), {},
                              {Atom::place(occ->lhs->node->name(), i)}));
      break;
    case LtlOp::land:
      for (int i = 0; i <= n; ++i)
        prog.add(Rule::normal(Atom::sub(k, i), {sub(occ->lhs, i), sub(occ->rhs, i)}));
      break;
    case LtlOp::lor:
      for (int i = 0; i <= n; ++i)
        prog.add(Rule::normal(Atom::sub(k, i), {sub(occ->lhs, i)}));
      for (int i = 0; i <= n; ++i)
        prog.add(Rule::normal(Atom::sub(k, i), {sub(occ->rhs, i)}));
      break;
    case LtlOp::until:
      for (int i = 0; i <= n; ++i)
        prog.add(Rule::normal(Atom::sub(k, i), {sub(occ->rhs, i)}));
      for (int i = 0; i <= n; ++i)
        prog.add(Rule::normal(Atom::sub(k, i), {sub(occ->lhs, i), next_ref(i)}));
      for (int j = 1; j <= n; ++j)
        prog.add(Rule::normal(Atom::nextval(k), {Atom::nl(j), Atom::sub(k, j)}));
      break;
    case LtlOp::release:
      for (int i = 0; i <= n; ++i)
        prog.add(Rule::normal(Atom::sub(k, i), {sub(occ->rhs, i), sub(occ->lhs, i)}));
      for (int i = 0; i <= n; ++i)
        prog.add(Rule::normal(Atom::sub(k, i), {sub(occ->rhs, i), next_ref(i)}));
      prog.add(Rule::normal(Atom::sub(k, n), {sub(occ->rhs, n)}, {Atom::live()}));
      for (int j = 1; j <= n; ++j)
        prog.add(Rule::normal(Atom::nextval(k), {Atom::nl(j), Atom::sub(k, j)}));
      // The loop violates "rhs forever" exactly when the flag derives; its
      // absence lets the loop satisfy the release without a lhs witness.
      for (int j = 1; j <= n; ++j)
        prog.add(Rule::normal(Atom::loopflag(k), {Atom::il(j)}, {sub(occ->rhs, j)}));
      prog.add(Rule::normal(Atom::nextval(k), {Atom::le()}, {Atom::loopflag(k)}));
      break;
  }
}

}  // namespace

GroundProgram encode_ltl(const FormulaPtr& f, const Net& net, int n) {
  require_bound(n);
  if (!f) throw DomainError("cannot encode a null formula");
  if (!is_pnf(f))
    throw DomainError("the formula translation needs positive normal form");
  GroundProgram prog;
  for (int i = 0; i < n; ++i) prog.add(Rule::choice(Atom::el(i)));
  {
    // At n = 1 this is the degenerate single-atom form, kept so the program
    // grows by exactly the same rule set at every bound.
    std::vector<Atom> els;
    for (int i = 0; i < n; ++i) els.push_back(Atom::el(i));
    prog.add(Rule::conflict(std::move(els)));
  }
  for (int i = 0; i < n; ++i)
    for (const auto& p : net.places) {
      prog.add(Rule::constraint({Atom::el(i), Atom::place(p, i)}, {Atom::place(p, n)}));
      prog.add(Rule::constraint({Atom::el(i), Atom::place(p, n)}, {Atom::place(p, i)}));
    }
  for (int i = 0; i < n; ++i) {
    prog.add(Rule::normal(Atom::le(), {Atom::el(i)}));
    prog.add(Rule::normal(Atom::nl(i + 1), {Atom::el(i)}));
    prog.add(Rule::normal(Atom::il(i + 1), {Atom::el(i)}));
    prog.add(Rule::normal(Atom::il(i + 1), {Atom::il(i)}));
  }
  prog.add(Rule::constraint({Atom::le(), Atom::idle(n - 1)}));
  std::vector<int> visible = visible_transitions(f, net);
  if (visible.size() >= 2)
    for (int i = 0; i < n; ++i) {
      std::vector<Atom> atoms;
      for (int t : visible) atoms.push_back(Atom::trans(net.transitions[t], i));
      prog.add(Rule::conflict(std::move(atoms)));
    }
  std::deque<FormOcc> pool;
  int next = 0;
  FormOcc* root = build_form(f, pool, next, net);
  emit_form(root, n, prog);
  prog.add(Rule::constraint({}, {Atom::sub(root->id, 0)}));
  return prog;
}

GroundProgram encode_interleaving(const Net& net, int n) {
  require_bound(n);
  GroundProgram prog;
  if (net.ntransitions() < 2) return prog;
  for (int i = 0; i < n; ++i) {
    std::vector<Atom> atoms;
    for (const auto& t : net.transitions) atoms.push_back(Atom::trans(t, i));
    prog.add(Rule::conflict(std::move(atoms)));
  }
  return prog;
}

// --- staged atoms ----------------------------------------------------------------

GroundProgram stage_atoms(const GroundProgram& p, const Net& net, int n) {
  require_bound(n);
  // Forward closure of atom existence from the declared initial marking.
  std::vector<Marking> ep(n + 1, Marking(net.nplaces()));
  std::vector<std::vector<char>> et(n, std::vector<char>(net.ntransitions(), 0));
  ep[0] = net.initial;
  for (int i = 0; i < n; ++i) {
    ep[i + 1] = ep[i];
    for (std::size_t t = 0; t < net.ntransitions(); ++t)
      if (net.pre[t].is_subset_of(ep[i])) {
        et[i][t] = 1;
        ep[i + 1] |= net.post[t];
      }
  }
  auto exists = [&](const Atom& a) -> bool {
    if (a.kind() == Atom::Kind::place) {
      int idx = net.place_index(a.id());
      return idx >= 0 && a.time() >= 0 && a.time() <= n && ep[a.time()][idx];
    }
    if (a.kind() == Atom::Kind::trans) {
      int idx = net.transition_index(a.id());
      return idx >= 0 && a.time() >= 0 && a.time() < n && et[a.time()][idx];
    }
    return true;
  };
  GroundProgram out;
  for (const Rule& r : p.rules()) {
    if (r.kind == Rule::Kind::conflict) {
      std::vector<Atom> atoms;
      for (const Atom& a : r.pos)
        if (exists(a)) atoms.push_back(a);
      if (atoms.size() >= 2) out.add(Rule::conflict(std::move(atoms)));
      continue;
    }
    if (r.head && !exists(*r.head)) continue;
    bool alive = true;
    for (const Atom& a : r.pos)
      if (!exists(a)) {
        alive = false;
        break;
      }
    if (!alive) continue;
    std::vector<Atom> neg;
    for (const Atom& a : r.neg)
      if (exists(a)) neg.push_back(a);
    switch (r.kind) {
      case Rule::Kind::normal:
        out.add(Rule::normal(*r.head, r.pos, std::move(neg)));
        break;
      case Rule::Kind::constraint:
        out.add(Rule::constraint(r.pos, std::move(neg)));
        break;
      case Rule::Kind::choice:
        out.add(Rule::choice(*r.head, r.pos, std::move(neg)));
        break;
      case Rule::Kind::conflict:
        break;  // handled above
    }
  }
  return out;
}

// --- decoding ----------------------------------------------------------------

StepExecution decode_execution(const StableModel& delta, const Net& net, int n) {
  require_bound(n);
  std::vector<Marking> markings(n + 1, Marking(net.nplaces()));
  std::vector<std::vector<int>> steps(n);
  for (const Atom& a : delta.atoms) {
    if (a.kind() == Atom::Kind::place) {
      int p = net.place_index(a.id());
      if (p < 0)
        throw VerificationError("model marks unknown place '" + a.id() + "'");
      if (a.time() < 0 || a.time() > n)
        throw VerificationError("model atom " + a.to_text() + " is out of the window");
      markings[a.time()].set(std::size_t(p));
    } else if (a.kind() == Atom::Kind::trans) {
      int t = net.transition_index(a.id());
      if (t < 0)
        throw VerificationError("model fires unknown transition '" + a.id() + "'");
      if (a.time() < 0 || a.time() >= n)
        throw VerificationError("model atom " + a.to_text() + " is out of the window");
      steps[a.time()].push_back(t);
    }
  }
  for (auto& s : steps) std::sort(s.begin(), s.end());
  for (int i = 0; i < n; ++i) {
    if (!is_step(net, markings[i], steps[i]))
      throw VerificationError("decoded step " + std::to_string(i) +
                              " is not fireable; the model is not an execution");
    if (fire_step(net, markings[i], steps[i]) != markings[std::size_t(i) + 1])
      throw VerificationError("decoded step " + std::to_string(i) +
                              " does not produce the next decoded marking");
  }
  StepExecution ex;
  ex.markings = std::move(markings);
  ex.steps = std::move(steps);
  return ex;
}

Counterexample decode_counterexample(const StableModel& delta, const Net& net,
                                     int n) {
  Counterexample out;
  out.execution = decode_execution(delta, net, n);
  std::vector<int> nls;
  std::set<int> ils;
  bool has_le = false, has_live = false;
  for (const Atom& a : delta.atoms) switch (a.kind()) {
      case Atom::Kind::nl:
        nls.push_back(a.time());
        break;
      case Atom::Kind::il:
        ils.insert(a.time());
        break;
      case Atom::Kind::le:
        has_le = true;
        break;
      case Atom::Kind::live:
        has_live = true;
        break;
      default:
        break;
    }
  if (has_live == deadlocked(net, out.execution.markings.back()))
    throw VerificationError("liveness atom disagrees with the final marking");
  if (nls.size() > 1)
    throw VerificationError("model names more than one loop successor");
  if (nls.size() == 1) {
    int j = nls.front();
    if (j < 1 || j > n)
      throw VerificationError("loop successor index out of the window");
    std::size_t l = std::size_t(j) - 1;
    if (!has_le) throw VerificationError("loop model without the loop flag");
    for (int k = j; k <= n; ++k)
      if (!ils.count(k))
        throw VerificationError("loop model misses an in-loop marker");
    if (out.execution.markings[l] != out.execution.markings.back())
      throw VerificationError("loop start and final markings differ");
    if (out.execution.steps.back().empty())
      throw VerificationError("loop model idles in the last step");
    out.shape = Counterexample::Shape::loop;
    out.loop = l;
    return out;
  }
  if (has_le)
    throw VerificationError("loop flag set without a loop successor");
  out.shape = has_live ? Counterexample::Shape::non_maximal
                       : Counterexample::Shape::deadlock;
  return out;
}

}  // namespace stepbmc
