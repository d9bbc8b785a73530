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
#include "stepbmc/solver.hpp"

#include <algorithm>
#include <map>

#include "stepbmc/common.hpp"

namespace stepbmc {

namespace {

constexpr int kNoHead = -1;

enum Val : unsigned char { U = 0, T = 1, F = 2 };

struct EngineRule {
  int head = kNoHead;   // kNoHead for integrity constraints
  bool choice = false;  // choice rules never force their head
  std::vector<int> pos;
  std::vector<int> neg;
  int unassigned = 0;  // body literals on unassigned atoms
  int nfalse = 0;      // refuted body literals
};

struct Group {  // threshold-2 conflict rule
  std::vector<int> atoms;
  int ntrue = 0;
};

// Search state for one program. Atom ids follow the canonical atom order, so
// heuristic ties resolve canonically for free.
//
// Invariant: the per-rule counters and per-atom viable-support counts are a
// pure function of value_[], updated eagerly in assign() and reversed exactly
// in unassign(). Derived assignments and conflict detection run from the
// propagation queue, where every check is a persistent condition on those
// counters, never a one-shot edge, so processing order cannot lose anything.
class Engine {
 public:
  Engine(const GroundProgram& p, const SolveBudget& budget)
      : program_(p), budget_(budget) {
    index_atoms();
    build_rules();
    expanded_ = expand(p);
    for (const auto& r : p.rules())
      if (r.kind == Rule::Kind::choice) choice_heads_.push_back(*r.head);
    std::sort(choice_heads_.begin(), choice_heads_.end());
    choice_heads_.erase(std::unique(choice_heads_.begin(), choice_heads_.end()),
                        choice_heads_.end());
  }

  // Runs the DFS. on_model returns true to keep searching (enumeration).
  // Returns budget_exceeded or unsat; "unsat" means the space is exhausted
  // (callers decide sat-ness from the models they were handed).
  template <typename Fn>
  SolveStatus run(SolveStats& stats, Fn on_model) {
    stats_ = &stats;
    if (!initial_propagate()) return SolveStatus::unsat;
    while (true) {
      int a = pick_branch_atom();
      if (a < 0) {
        // Full assignment; certify the candidate via the reduct test.
        std::vector<Atom> cand;
        for (std::size_t i = 0; i < atoms_.size(); ++i)
          if (value_[i] == T) cand.push_back(atoms_[i]);
        if (certify(cand)) {
          ++stats_->models;
          if (!on_model(StableModel::of(std::move(cand)))) return SolveStatus::unsat;
        }
        if (!backtrack()) return SolveStatus::unsat;  // space exhausted
        continue;
      }
      if (budget_.max_decisions && stats_->decisions >= budget_.max_decisions)
        return SolveStatus::budget_exceeded;
      ++stats_->decisions;
      decisions_.push_back({trail_.size(), a, false});
      if (!assign_and_propagate(a, T)) {
        if (!backtrack()) return SolveStatus::unsat;
      }
    }
  }

 private:
  void index_atoms() {
    atoms_ = program_.atoms();
    for (std::size_t i = 0; i < atoms_.size(); ++i) atom_id_[atoms_[i]] = int(i);
    std::size_t n = atoms_.size();
    value_.assign(n, U);
    score_.assign(n, 0);
    viable_.assign(n, 0);
    supports_.assign(n, {});
    pos_occ_.assign(n, {});
    neg_occ_.assign(n, {});
    grp_occ_.assign(n, {});
  }

  int id_of(const Atom& a) const { return atom_id_.at(a); }

  void build_rules() {
    for (const auto& r : program_.rules()) {
      if (r.kind == Rule::Kind::conflict) {
        Group g;
        for (const auto& a : r.pos) {
          g.atoms.push_back(id_of(a));
          ++score_[id_of(a)];
        }
        grps_.push_back(std::move(g));
        for (int a : grps_.back().atoms) grp_occ_[a].push_back(int(grps_.size()) - 1);
        continue;
      }
      EngineRule er;
      if (r.head) er.head = id_of(*r.head);
      er.choice = r.kind == Rule::Kind::choice;
      for (const auto& a : r.pos) er.pos.push_back(id_of(a));
      for (const auto& a : r.neg) er.neg.push_back(id_of(a));
      er.unassigned = int(er.pos.size() + er.neg.size());
      int rid = int(rules_.size());
      rules_.push_back(std::move(er));
      const EngineRule& added = rules_[rid];
      if (added.head != kNoHead) {
        ++score_[added.head];
        supports_[added.head].push_back(rid);
        ++viable_[added.head];
      }
      for (int a : added.pos) {
        pos_occ_[a].push_back(rid);
        ++score_[a];
      }
      for (int a : added.neg) {
        neg_occ_[a].push_back(rid);
        ++score_[a];
      }
    }
    // Branch order: rule-occurrence count descending, canonical order on ties.
    branch_order_.resize(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) branch_order_[i] = int(i);
    std::stable_sort(branch_order_.begin(), branch_order_.end(),
                     [this](int a, int b) { return score_[a] > score_[b]; });
  }

  // --- assignment (eager counters) ------------------------------------------

  bool assign(int a, Val v) {
    if (value_[a] != U) return value_[a] == v;
    value_[a] = v;
    trail_.push_back(a);
    ++stats_->propagations;
    for (int rid : pos_occ_[a]) {
      EngineRule& r = rules_[rid];
      --r.unassigned;
      if (v == F && ++r.nfalse == 1 && r.head != kNoHead) --viable_[r.head];
    }
    for (int rid : neg_occ_[a]) {
      EngineRule& r = rules_[rid];
      --r.unassigned;
      if (v == T && ++r.nfalse == 1 && r.head != kNoHead) --viable_[r.head];
    }
    if (v == T)
      for (int g : grp_occ_[a]) ++grps_[g].ntrue;
    queue_.push_back(a);
    return true;
  }

  void unassign(int a) {
    Val v = value_[a];
    value_[a] = U;
    if (v == T)
      for (int g : grp_occ_[a]) --grps_[g].ntrue;
    for (int rid : pos_occ_[a]) {
      EngineRule& r = rules_[rid];
      ++r.unassigned;
      if (v == F && --r.nfalse == 0 && r.head != kNoHead) ++viable_[r.head];
    }
    for (int rid : neg_occ_[a]) {
      EngineRule& r = rules_[rid];
      ++r.unassigned;
      if (v == T && --r.nfalse == 0 && r.head != kNoHead) ++viable_[r.head];
    }
  }

  // --- checks (conditions on counters; may assign further atoms) ------------

  bool check_rule(int rid) {
    EngineRule& r = rules_[rid];
    if (r.nfalse > 0) return true;
    if (r.unassigned == 0) {
      if (r.head == kNoHead) return false;  // satisfied integrity constraint
      if (r.choice) return true;
      return assign(r.head, T);  // fails when the head is already false
    }
    if (r.unassigned == 1 && !r.choice &&
        (r.head == kNoHead || value_[r.head] == F)) {
      // Body one literal away from satisfaction under a false head: the
      // remaining literal must be refuted.
      for (int a : r.pos)
        if (value_[a] == U) return assign(a, F);
      for (int a : r.neg)
        if (value_[a] == U) return assign(a, T);
    }
    return true;
  }

  bool force_body(int rid) {
    EngineRule& r = rules_[rid];
    for (int a : r.pos)
      if (value_[a] == U && !assign(a, T)) return false;
    for (int a : r.neg)
      if (value_[a] == U && !assign(a, F)) return false;
    return true;
  }

  bool check_atom_support(int a) {
    if (value_[a] == F) return true;
    if (viable_[a] == 0) {
      if (value_[a] == T) return false;  // true atom lost all support
      return assign(a, F);
    }
    if (value_[a] == T && viable_[a] == 1) {
      // Sole potential support left: its body must come out satisfied.
      for (int rid : supports_[a])
        if (rules_[rid].nfalse == 0) return force_body(rid);
    }
    return true;
  }

  bool propagate_atom(int a) {
    Val v = value_[a];
    if (v == T) {
      for (int g : grp_occ_[a]) {
        Group& grp = grps_[g];
        if (grp.ntrue >= 2) return false;
        for (int other : grp.atoms)
          if (other != a && value_[other] == U && !assign(other, F)) return false;
      }
      for (int rid : pos_occ_[a])
        if (!check_rule(rid)) return false;
      for (int rid : neg_occ_[a]) {
        if (!check_rule(rid)) return false;
        int h = rules_[rid].head;
        if (h != kNoHead && !check_atom_support(h)) return false;
      }
      if (!check_atom_support(a)) return false;
    } else {
      for (int rid : pos_occ_[a]) {
        if (!check_rule(rid)) return false;
        int h = rules_[rid].head;
        if (h != kNoHead && !check_atom_support(h)) return false;
      }
      for (int rid : neg_occ_[a])
        if (!check_rule(rid)) return false;
      for (int rid : supports_[a])
        if (!rules_[rid].choice && !check_rule(rid)) return false;
    }
    return true;
  }

  bool flush_queue() {
    while (!queue_.empty()) {
      int a = queue_.back();
      queue_.pop_back();
      if (!propagate_atom(a)) {
        queue_.clear();
        return false;
      }
    }
    return true;
  }

  // Wellfounded upper bound: atoms underivable even with every remaining
  // negative literal read optimistically can only be false. This catches
  // unfounded positive loops long before full assignments.
  bool atmost_pass(bool& changed) {
    changed = false;
    std::vector<char> in_p(atoms_.size(), 0);
    std::vector<int> missing(rules_.size(), 0);
    std::vector<int> ready;
    for (std::size_t rid = 0; rid < rules_.size(); ++rid) {
      const EngineRule& r = rules_[rid];
      if (r.head == kNoHead) {
        missing[rid] = -1;
        continue;
      }
      bool blocked = value_[r.head] == F;
      if (!blocked)
        for (int a : r.neg)
          if (value_[a] == T) {
            blocked = true;
            break;
          }
      if (!blocked)
        for (int a : r.pos)
          if (value_[a] == F) {
            blocked = true;
            break;
          }
      if (blocked) {
        missing[rid] = -1;
        continue;
      }
      missing[rid] = int(r.pos.size());
      if (missing[rid] == 0 && !in_p[r.head]) {
        in_p[r.head] = 1;
        ready.push_back(r.head);
      }
    }
    while (!ready.empty()) {
      int a = ready.back();
      ready.pop_back();
      for (int rid : pos_occ_[a]) {
        if (missing[rid] <= 0) continue;
        if (--missing[rid] == 0) {
          int h = rules_[rid].head;
          if (!in_p[h]) {
            in_p[h] = 1;
            ready.push_back(h);
          }
        }
      }
    }
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      if (in_p[a]) continue;
      if (value_[a] == T) return false;
      if (value_[a] == U) {
        changed = true;
        if (!assign(int(a), F)) return false;
      }
    }
    return true;
  }

  bool propagate_fixpoint() {
    while (true) {
      if (!flush_queue()) return false;
      bool changed = false;
      if (!atmost_pass(changed)) {
        queue_.clear();
        return false;
      }
      if (!changed) return true;
    }
  }

  bool assign_and_propagate(int a, Val v) {
    if (!assign(a, v)) return false;
    return propagate_fixpoint();
  }

  bool initial_propagate() {
    for (std::size_t rid = 0; rid < rules_.size(); ++rid)
      if (!check_rule(int(rid))) {
        queue_.clear();
        return false;
      }
    for (std::size_t a = 0; a < atoms_.size(); ++a)
      if (!check_atom_support(int(a))) {
        queue_.clear();
        return false;
      }
    return propagate_fixpoint();
  }

  // --- backtracking ----------------------------------------------------------

  // Rewinds to the most recent unflipped decision and takes its false branch.
  // Returns false when the whole tree is exhausted.
  bool backtrack() {
    ++stats_->conflicts;
    while (!decisions_.empty()) {
      Decision& d = decisions_.back();
      while (trail_.size() > d.trail_pos) {
        unassign(trail_.back());
        trail_.pop_back();
      }
      queue_.clear();
      if (!d.flipped) {
        d.flipped = true;
        if (assign_and_propagate(d.atom, F)) return true;
        ++stats_->conflicts;
        continue;  // the false branch conflicts too: unwind further
      }
      decisions_.pop_back();
    }
    return false;
  }

  int pick_branch_atom() const {
    for (int a : branch_order_)
      if (value_[a] == U) return a;
    return -1;
  }

  // Reduct test against the cached expansion, with the forced auxiliary
  // values completed from the candidate.
  bool certify(const std::vector<Atom>& candidate) const {
    std::vector<Atom> completed = candidate;
    std::vector<Atom> sorted_cand = candidate;
    std::sort(sorted_cand.begin(), sorted_cand.end());
    for (const auto& h : choice_heads_)
      if (!std::binary_search(sorted_cand.begin(), sorted_cand.end(), h))
        completed.push_back(Atom::primed(h));
    std::sort(completed.begin(), completed.end());
    return least_model(reduct(expanded_, completed)) == completed;
  }

  struct Decision {
    std::size_t trail_pos;
    int atom;
    bool flipped;
  };

  const GroundProgram& program_;
  SolveBudget budget_;
  SolveStats* stats_ = nullptr;

  std::vector<Atom> atoms_;
  std::map<Atom, int> atom_id_;
  std::vector<Val> value_;
  std::vector<int> score_;
  std::vector<int> viable_;
  std::vector<std::vector<int>> supports_, pos_occ_, neg_occ_, grp_occ_;
  std::vector<EngineRule> rules_;
  std::vector<Group> grps_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::vector<Decision> decisions_;
  std::vector<int> branch_order_;
  GroundProgram expanded_;
  std::vector<Atom> choice_heads_;
};

}  // namespace

SolveResult solve(const GroundProgram& p, const SolveBudget& budget) {
  SolveResult res;
  Engine eng(p, budget);
  std::optional<StableModel> model;
  SolveStatus st = eng.run(res.stats, [&](StableModel m) {
    model = std::move(m);
    return false;  // stop at the first model
  });
  if (st == SolveStatus::budget_exceeded) {
    res.status = st;
    return res;
  }
  if (model) {
    if (!is_stable(p, model->atoms))
      throw VerificationError("solver produced a non-stable model");
    res.status = SolveStatus::sat;
    res.model = std::move(model);
  } else {
    res.status = SolveStatus::unsat;
  }
  return res;
}

EnumerateResult enumerate(const GroundProgram& p, std::size_t limit,
                          const SolveBudget& budget) {
  EnumerateResult res;
  Engine eng(p, budget);
  SolveStatus st = eng.run(res.stats, [&](StableModel m) {
    if (!is_stable(p, m.atoms))
      throw VerificationError("solver produced a non-stable model");
    res.models.push_back(std::move(m));
    return limit == 0 || res.models.size() < limit;
  });
  if (st == SolveStatus::budget_exceeded)
    res.status = EnumerateStatus::budget_exceeded;
  else if (limit != 0 && res.models.size() >= limit)
    res.status = EnumerateStatus::limit_reached;
  else
    res.status = EnumerateStatus::complete;
  return res;
}

}  // namespace stepbmc
