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
#include "stepbmc/asp.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <utility>

namespace stepbmc {

// ---------------------------------------------------------------------------
// Atom

Atom Atom::place(std::string id, int time) {
  Atom a;
  a.kind_ = Kind::place;
  a.id_ = std::move(id);
  a.time_ = time;
  return a;
}

Atom Atom::trans(std::string id, int time) {
  Atom a;
  a.kind_ = Kind::trans;
  a.id_ = std::move(id);
  a.time_ = time;
  return a;
}

Atom Atom::idle(int time) {
  Atom a;
  a.kind_ = Kind::idle;
  a.time_ = time;
  return a;
}

Atom Atom::el(int time) {
  Atom a;
  a.kind_ = Kind::el;
  a.time_ = time;
  return a;
}

Atom Atom::le() {
  Atom a;
  a.kind_ = Kind::le;
  return a;
}

Atom Atom::nl(int time) {
  Atom a;
  a.kind_ = Kind::nl;
  a.time_ = time;
  return a;
}

Atom Atom::il(int time) {
  Atom a;
  a.kind_ = Kind::il;
  a.time_ = time;
  return a;
}

Atom Atom::live() {
  Atom a;
  a.kind_ = Kind::live;
  return a;
}

Atom Atom::cond(int node, int time) {
  Atom a;
  a.kind_ = Kind::cond;
  a.node_ = node;
  a.time_ = time;
  return a;
}

Atom Atom::sub(int node, int time) {
  Atom a;
  a.kind_ = Kind::sub;
  a.node_ = node;
  a.time_ = time;
  return a;
}

Atom Atom::nextval(int node) {
  Atom a;
  a.kind_ = Kind::nextval;
  a.node_ = node;
  return a;
}

Atom Atom::loopflag(int node) {
  Atom a;
  a.kind_ = Kind::loopflag;
  a.node_ = node;
  return a;
}

Atom Atom::named(std::string name, std::optional<int> time) {
  Atom a;
  a.kind_ = Kind::named;
  a.id_ = std::move(name);
  a.time_ = time ? *time : -1;
  return a;
}

Atom Atom::primed(const Atom& base) {
  Atom a;
  a.kind_ = Kind::primed;
  a.base_ = std::make_shared<const Atom>(base);
  return a;
}

Atom Atom::fail(int index) {
  Atom a;
  a.kind_ = Kind::fail;
  a.node_ = index;
  return a;
}

const Atom& Atom::base() const {
  if (!base_) throw DomainError("atom has no base");
  return *base_;
}

std::string Atom::to_text() const {
  switch (kind_) {
    case Kind::place:
    case Kind::trans:
      return id_ + "(" + std::to_string(time_) + ")";
    case Kind::idle:
      return "idle(" + std::to_string(time_) + ")";
    case Kind::el:
      return "el(" + std::to_string(time_) + ")";
    case Kind::le:
      return "le";
    case Kind::nl:
      return "nl(" + std::to_string(time_) + ")";
    case Kind::il:
      return "il(" + std::to_string(time_) + ")";
    case Kind::live:
      return "live";
    case Kind::cond:
      return "_c" + std::to_string(node_) + "(" + std::to_string(time_) + ")";
    case Kind::sub:
      return "_sf" + std::to_string(node_) + "(" + std::to_string(time_) + ")";
    case Kind::nextval:
      return "_nx" + std::to_string(node_);
    case Kind::loopflag:
      return "_c" + std::to_string(node_);
    case Kind::named:
      return time_ < 0 ? id_ : id_ + "(" + std::to_string(time_) + ")";
    case Kind::primed:
      return "_np_" + base_->to_text();
    case Kind::fail:
      return "_fail_" + std::to_string(node_);
  }
  return "?";
}

bool Atom::operator==(const Atom& o) const {
  return (*this <=> o) == std::strong_ordering::equal;
}

std::strong_ordering Atom::operator<=>(const Atom& o) const {
  if (auto c = kind_ <=> o.kind_; c != 0) return c;
  if (auto c = id_ <=> o.id_; c != 0) return c;
  if (auto c = node_ <=> o.node_; c != 0) return c;
  if (auto c = time_ <=> o.time_; c != 0) return c;
  if (base_ && o.base_) return *base_ <=> *o.base_;
  return bool(base_) <=> bool(o.base_);
}

// ---------------------------------------------------------------------------
// Rule

namespace {

std::vector<Atom> dedupe(std::vector<Atom> v) {
  std::vector<Atom> out;
  out.reserve(v.size());
  for (auto& a : v)
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
  return out;
}

}  // namespace

Rule Rule::fact(Atom h) { return normal(std::move(h), {}, {}); }

Rule Rule::normal(Atom h, std::vector<Atom> pos, std::vector<Atom> neg) {
  Rule r;
  r.kind = Kind::normal;
  r.head = std::move(h);
  r.pos = dedupe(std::move(pos));
  r.neg = dedupe(std::move(neg));
  return r;
}

Rule Rule::constraint(std::vector<Atom> pos, std::vector<Atom> neg) {
  Rule r;
  r.kind = Kind::constraint;
  r.pos = dedupe(std::move(pos));
  r.neg = dedupe(std::move(neg));
  return r;
}

Rule Rule::choice(Atom h, std::vector<Atom> pos, std::vector<Atom> neg) {
  Rule r;
  r.kind = Kind::choice;
  r.head = std::move(h);
  r.pos = dedupe(std::move(pos));
  r.neg = dedupe(std::move(neg));
  return r;
}

Rule Rule::conflict(std::vector<Atom> atoms) {
  Rule r;
  r.kind = Kind::conflict;
  r.pos = dedupe(std::move(atoms));
  if (r.pos.empty()) throw DomainError("conflict rule needs at least one atom");
  return r;
}

std::string Rule::to_text() const {
  auto body = [this]() {
    std::string s;
    bool first = true;
    for (const auto& a : pos) {
      if (!first) s += ", ";
      s += a.to_text();
      first = false;
    }
    for (const auto& a : neg) {
      if (!first) s += ", ";
      s += "not " + a.to_text();
      first = false;
    }
    return s;
  };
  switch (kind) {
    case Kind::normal:
      if (pos.empty() && neg.empty()) return head->to_text() + ".";
      return head->to_text() + " :- " + body() + ".";
    case Kind::constraint:
      return ":- " + body() + ".";
    case Kind::choice:
      if (pos.empty() && neg.empty()) return "{" + head->to_text() + "}.";
      return "{" + head->to_text() + "} :- " + body() + ".";
    case Kind::conflict: {
      std::string s = ":- 2 {";
      for (std::size_t i = 0; i < pos.size(); ++i) {
        if (i) s += ", ";
        s += pos[i].to_text();
      }
      return s + "}.";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// GroundProgram

void GroundProgram::append(const GroundProgram& other) {
  rules_.insert(rules_.end(), other.rules_.begin(), other.rules_.end());
}

std::vector<Atom> GroundProgram::atoms() const {
  std::set<Atom> s;
  for (const auto& r : rules_) {
    if (r.head) s.insert(*r.head);
    s.insert(r.pos.begin(), r.pos.end());
    s.insert(r.neg.begin(), r.neg.end());
  }
  return {s.begin(), s.end()};
}

std::string GroundProgram::to_text() const {
  std::string out;
  for (const auto& r : rules_) {
    out += r.to_text();
    out += '\n';
  }
  return out;
}

// --- text parsing ----------------------------------------------------------

namespace {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;
  std::size_t line;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool eat(std::string_view tok) {
    skip_ws();
    if (s.substr(i, tok.size()) == tok) {
      i += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, i + 1);
  }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// name or name(int); fixed encoder names map to their structured kinds.
Atom parse_atom(Cursor& c) {
  c.skip_ws();
  if (c.i >= c.s.size() || !ident_start(c.s[c.i])) c.fail("expected atom");
  std::size_t start = c.i;
  while (c.i < c.s.size() && ident_char(c.s[c.i])) ++c.i;
  std::string name(c.s.substr(start, c.i - start));
  if (name[0] == '_')
    throw ParseError("atom '" + name + "' is in a reserved namespace", c.line, start + 1);
  std::optional<int> time;
  if (c.i < c.s.size() && c.s[c.i] == '(') {
    ++c.i;
    c.skip_ws();
    std::size_t d = c.i;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
    if (d == c.i) c.fail("expected integer argument");
    time = std::stoi(std::string(c.s.substr(d, c.i - d)));
    c.skip_ws();
    if (c.i >= c.s.size() || c.s[c.i] != ')') c.fail("expected ')'");
    ++c.i;
  }
  if (!time) {
    if (name == "le") return Atom::le();
    if (name == "live") return Atom::live();
  } else {
    if (name == "idle") return Atom::idle(*time);
    if (name == "el") return Atom::el(*time);
    if (name == "nl") return Atom::nl(*time);
    if (name == "il") return Atom::il(*time);
  }
  return Atom::named(std::move(name), time);
}

// The 'not' keyword only counts when not glued to more identifier chars, so
// atoms like 'nothing' still parse.
bool at_keyword_not(Cursor& c) {
  c.skip_ws();
  if (c.s.substr(c.i, 3) != "not") return false;
  return c.i + 3 >= c.s.size() || !ident_char(c.s[c.i + 3]);
}

// "a, b, not c" up to (not including) the closing '.'.
void parse_body(Cursor& c, std::vector<Atom>& pos, std::vector<Atom>& neg) {
  while (true) {
    if (at_keyword_not(c)) {
      c.i += 3;
      neg.push_back(parse_atom(c));
    } else {
      pos.push_back(parse_atom(c));
    }
    if (c.eat(",")) continue;
    break;
  }
}

Rule parse_rule_body(Cursor& c) {
  if (c.eat(":-")) {
    c.skip_ws();
    if (c.s.substr(c.i, 1) == "2") {
      ++c.i;
      if (!c.eat("{")) c.fail("expected '{' after threshold");
      std::vector<Atom> atoms;
      while (true) {
        atoms.push_back(parse_atom(c));
        if (c.eat(",")) continue;
        break;
      }
      if (!c.eat("}")) c.fail("expected '}'");
      if (!c.eat(".")) c.fail("expected '.'");
      return Rule::conflict(std::move(atoms));
    }
    std::vector<Atom> pos, neg;
    if (!c.eat(".")) {  // ':- .' is the empty (always violated) constraint
      parse_body(c, pos, neg);
      if (!c.eat(".")) c.fail("expected '.'");
    }
    return Rule::constraint(std::move(pos), std::move(neg));
  }
  if (c.eat("{")) {
    Atom head = parse_atom(c);
    if (!c.eat("}")) c.fail("expected '}'");
    std::vector<Atom> pos, neg;
    if (c.eat(":-")) parse_body(c, pos, neg);
    if (!c.eat(".")) c.fail("expected '.'");
    return Rule::choice(std::move(head), std::move(pos), std::move(neg));
  }
  Atom head = parse_atom(c);
  std::vector<Atom> pos, neg;
  if (c.eat(":-")) parse_body(c, pos, neg);
  if (!c.eat(".")) c.fail("expected '.'");
  return Rule::normal(std::move(head), std::move(pos), std::move(neg));
}

Rule parse_rule_line(std::string_view text, std::size_t lineno) {
  Cursor c{text, 0, lineno};
  c.skip_ws();
  Rule r = parse_rule_body(c);
  c.skip_ws();
  if (c.i != c.s.size()) c.fail("trailing characters after rule");
  return r;
}

}  // namespace

GroundProgram GroundProgram::parse(std::string_view text) {
  GroundProgram p;
  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++lineno;
    if (auto cut = line.find('%'); cut != std::string_view::npos) line = line.substr(0, cut);
    bool blank = true;
    for (char ch : line)
      if (ch != ' ' && ch != '\t' && ch != '\r') blank = false;
    if (!blank) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.remove_suffix(1);
      p.add(parse_rule_line(line, lineno));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return p;
}

// ---------------------------------------------------------------------------
// StableModel

StableModel StableModel::of(std::vector<Atom> a) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return StableModel{std::move(a)};
}

bool StableModel::contains(const Atom& a) const {
  return std::binary_search(atoms.begin(), atoms.end(), a);
}

std::string StableModel::to_text() const {
  std::string s = "{";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += ", ";
    s += atoms[i].to_text();
  }
  return s + "}";
}

std::strong_ordering StableModel::operator<=>(const StableModel& o) const {
  return std::lexicographical_compare_three_way(atoms.begin(), atoms.end(),
                                                o.atoms.begin(), o.atoms.end());
}

// ---------------------------------------------------------------------------
// expand / reduct / least_model / is_stable / brute force

GroundProgram expand(const GroundProgram& p) {
  // Continue fail numbering above anything already present.
  int next_fail = 0;
  for (const auto& a : p.atoms())
    if (a.kind() == Atom::Kind::fail) next_fail = std::max(next_fail, a.index() + 1);

  GroundProgram out;
  for (const auto& r : p.rules()) {
    switch (r.kind) {
      case Rule::Kind::normal:
        out.add(r);
        break;
      case Rule::Kind::constraint: {
        Atom f = Atom::fail(next_fail++);
        std::vector<Atom> neg{f};
        neg.insert(neg.end(), r.neg.begin(), r.neg.end());
        out.add(Rule::normal(f, r.pos, std::move(neg)));
        break;
      }
      case Rule::Kind::choice: {
        Atom prime = Atom::primed(*r.head);
        std::vector<Atom> neg{prime};
        neg.insert(neg.end(), r.neg.begin(), r.neg.end());
        out.add(Rule::normal(*r.head, r.pos, std::move(neg)));
        out.add(Rule::normal(prime, {}, {*r.head}));
        break;
      }
      case Rule::Kind::conflict:
        for (std::size_t i = 0; i < r.pos.size(); ++i)
          for (std::size_t j = i + 1; j < r.pos.size(); ++j) {
            Atom f = Atom::fail(next_fail++);
            out.add(Rule::normal(f, {r.pos[i], r.pos[j]}, {f}));
          }
        break;
    }
  }
  return out;
}

namespace {

bool in_sorted(const std::vector<Atom>& v, const Atom& a) {
  return std::binary_search(v.begin(), v.end(), a);
}

std::vector<Atom> sorted_unique(std::vector<Atom> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

GroundProgram reduct(const GroundProgram& p, const std::vector<Atom>& delta) {
  std::vector<Atom> d = sorted_unique(delta);
  GroundProgram out;
  for (const auto& r : p.rules()) {
    if (r.kind != Rule::Kind::normal)
      throw DomainError("reduct is defined on normal rules only");
    bool blocked = false;
    for (const auto& a : r.neg)
      if (in_sorted(d, a)) {
        blocked = true;
        break;
      }
    if (!blocked) out.add(Rule::normal(*r.head, r.pos, {}));
  }
  return out;
}

std::vector<Atom> least_model(const GroundProgram& p) {
  for (const auto& r : p.rules())
    if (r.kind != Rule::Kind::normal || !r.neg.empty())
      throw DomainError("least model is defined on positive normal programs");

  // Forward chaining with per-rule unsatisfied-premise counters.
  std::map<Atom, std::vector<std::size_t>> watch;
  std::vector<std::size_t> missing(p.rules().size());
  std::set<Atom> model;
  std::vector<Atom> queue;
  for (std::size_t i = 0; i < p.rules().size(); ++i) {
    const auto& r = p.rules()[i];
    missing[i] = r.pos.size();
    for (const auto& a : r.pos) watch[a].push_back(i);
    if (missing[i] == 0 && model.insert(*r.head).second) queue.push_back(*r.head);
  }
  while (!queue.empty()) {
    Atom a = queue.back();
    queue.pop_back();
    auto it = watch.find(a);
    if (it == watch.end()) continue;
    for (std::size_t i : it->second) {
      if (--missing[i] == 0) {
        const Atom& h = *p.rules()[i].head;
        if (model.insert(h).second) queue.push_back(h);
      }
    }
    watch.erase(it);  // each premise atom is counted once per rule occurrence list
  }
  return {model.begin(), model.end()};
}

bool is_stable(const GroundProgram& p, const std::vector<Atom>& delta) {
  GroundProgram ex = expand(p);
  std::vector<Atom> d = sorted_unique(delta);
  // Complete the forced auxiliary values: a choice head not in delta makes its
  // primed partner true; fail atoms are never true in a stable model.
  std::vector<Atom> completed = d;
  for (const auto& r : p.rules())
    if (r.kind == Rule::Kind::choice && !in_sorted(d, *r.head))
      completed.push_back(Atom::primed(*r.head));
  completed = sorted_unique(completed);
  std::vector<Atom> lm = least_model(reduct(ex, completed));
  return lm == completed;
}

std::vector<StableModel> brute_force_models(const GroundProgram& p,
                                            std::size_t max_enum_atoms) {
  std::vector<Atom> atoms = p.atoms();
  if (atoms.size() > max_enum_atoms)
    throw DomainError("brute force enumeration capped at " +
                      std::to_string(max_enum_atoms) + " atoms");
  std::vector<StableModel> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << atoms.size()); ++mask) {
    std::vector<Atom> delta;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (mask & (std::uint64_t(1) << i)) delta.push_back(atoms[i]);
    if (is_stable(p, delta)) out.push_back(StableModel::of(std::move(delta)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace stepbmc
