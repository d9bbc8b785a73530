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
// Ground normal logic programs under the stable model semantics, plus the
// three rule shorthands used by the encoders: integrity constraints, choice
// rules, and binary-threshold conflict rules. Everything here is value
// semantics; programs are plain rule lists.
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stepbmc/common.hpp"

namespace stepbmc {

// A ground atom. Structured symbols instead of strings so that encoder output
// can never collide with auxiliary atoms introduced by rule expansion.
//
// Text forms (documented in README):
//   place/trans p,t at i   p(i), t(i)
//   idle/el/nl/il at i     idle(i), el(i), nl(i), il(i)
//   le, live               le, live
//   cond(k, i)             _c<k>(i)        condition-tree node k at time i
//   sub(k, i)              _sf<k>(i)       formula-tree node k at time i
//   nextval(k)             _nx<k>
//   loopflag(k)            _c<k>
//   named n (at i)         n, n(i)         plain atoms from parsed programs
//   primed(a)              _np_<text of a>
//   fail(k)                _fail_<k>
class Atom {
 public:
  enum class Kind : std::uint8_t {
    place,
    trans,
    idle,
    el,
    le,
    nl,
    il,
    live,
    cond,
    sub,
    nextval,
    loopflag,
    named,
    primed,
    fail,
  };

  static Atom place(std::string id, int time);
  static Atom trans(std::string id, int time);
  static Atom idle(int time);
  static Atom el(int time);
  static Atom le();
  static Atom nl(int time);
  static Atom il(int time);
  static Atom live();
  static Atom cond(int node, int time);
  static Atom sub(int node, int time);
  static Atom nextval(int node);
  static Atom loopflag(int node);
  static Atom named(std::string name, std::optional<int> time = {});
  static Atom primed(const Atom& base);
  static Atom fail(int index);

  Kind kind() const { return kind_; }
  const std::string& id() const { return id_; }  // place/trans/named
  int time() const { return time_; }             // -1 when untimed
  int node() const { return node_; }             // cond/sub/nextval/loopflag
  int index() const { return node_; }            // fail
  const Atom& base() const;                      // primed

  std::string to_text() const;

  bool operator==(const Atom& o) const;
  std::strong_ordering operator<=>(const Atom& o) const;

 private:
  Kind kind_ = Kind::named;
  int node_ = -1;
  int time_ = -1;
  std::string id_;
  std::shared_ptr<const Atom> base_;
};

struct Rule {
  enum class Kind : std::uint8_t { normal, constraint, choice, conflict };

  Kind kind = Kind::normal;
  std::optional<Atom> head;  // normal and choice rules only
  std::vector<Atom> pos;     // conflict rules keep their atom list here
  std::vector<Atom> neg;

  // Constructors deduplicate body lists (first occurrence kept). A conflict
  // rule needs a nonempty atom list and its threshold is fixed at 2; the
  // single-atom form is accepted and never fires (the threshold cannot be
  // reached), which keeps encoder emission uniform at degenerate bounds.
  static Rule fact(Atom h);
  static Rule normal(Atom h, std::vector<Atom> pos, std::vector<Atom> neg = {});
  static Rule constraint(std::vector<Atom> pos, std::vector<Atom> neg = {});
  static Rule choice(Atom h, std::vector<Atom> pos = {}, std::vector<Atom> neg = {});
  static Rule conflict(std::vector<Atom> atoms);

  std::string to_text() const;
  bool operator==(const Rule&) const = default;
};

class GroundProgram {
 public:
  void add(Rule r) { rules_.push_back(std::move(r)); }
  void append(const GroundProgram& other);
  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }

  // All atoms occurring anywhere in the program, sorted, unique.
  std::vector<Atom> atoms() const;

  // One rule per line, trailing newline, byte-stable.
  std::string to_text() const;

  // Inverse of to_text for the documented format. Plain atoms become
  // Kind::named except the fixed encoder names (idle/el/le/nl/il/live).
  // Atoms in the reserved namespaces (leading underscore) are rejected.
  // '%' starts a comment; blank lines are skipped.
  static GroundProgram parse(std::string_view text);

  bool operator==(const GroundProgram&) const = default;

 private:
  std::vector<Rule> rules_;
};

// A stable model: sorted unique atom set.
struct StableModel {
  std::vector<Atom> atoms;

  static StableModel of(std::vector<Atom> a);
  bool contains(const Atom& a) const;
  std::string to_text() const;
  bool operator==(const StableModel&) const = default;
  std::strong_ordering operator<=>(const StableModel& o) const;
};

// Rewrites shorthands into normal rules over fresh primed/fail atoms:
//   {a} <- B          becomes  a <- not _np_a, B   and   _np_a <- not a.
//   <- B              becomes  _fail_k <- not _fail_k, B.
//   <- 2 {a1,...,am}  becomes  _fail_k <- not _fail_k, ai, aj  per pair i<j.
// Fail indices continue above any already present in the input.
GroundProgram expand(const GroundProgram& p);

// Reduct of a normal program w.r.t. delta: drops rules whose negative body
// meets delta, strips negation from the rest. Throws DomainError on
// shorthand rules.
GroundProgram reduct(const GroundProgram& p, const std::vector<Atom>& delta);

// Least model of a positive normal program (throws DomainError if any rule
// still carries negation). Returned sorted.
std::vector<Atom> least_model(const GroundProgram& p);

// Stable-model test. Shorthands are expanded internally and the values of the
// introduced auxiliaries are completed from delta (primed heads of unchosen
// choice rules become true, fail atoms stay false) before the fixpoint
// comparison.
bool is_stable(const GroundProgram& p, const std::vector<Atom>& delta);

// Tests every subset of Atoms(p) via is_stable. Guard against blowup:
// throws DomainError if |Atoms(p)| > max_enum_atoms. Models come back in
// canonical order.
std::vector<StableModel> brute_force_models(const GroundProgram& p,
                                            std::size_t max_enum_atoms = 22);

}  // namespace stepbmc
