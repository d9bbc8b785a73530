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
#include "stepbmc/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

#include "stepbmc/common.hpp"

namespace stepbmc {

FormulaPtr Formula::top() { return FormulaPtr(new Formula(LtlOp::top, {}, {}, {})); }
FormulaPtr Formula::bot() { return FormulaPtr(new Formula(LtlOp::bot, {}, {}, {})); }
FormulaPtr Formula::atom(std::string name) {
  return FormulaPtr(new Formula(LtlOp::atom, std::move(name), {}, {}));
}
FormulaPtr Formula::neg(FormulaPtr f) {
  return FormulaPtr(new Formula(LtlOp::neg, {}, std::move(f), {}));
}
FormulaPtr Formula::lor(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(LtlOp::lor, {}, std::move(a), std::move(b)));
}
FormulaPtr Formula::land(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(LtlOp::land, {}, std::move(a), std::move(b)));
}
FormulaPtr Formula::until(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(LtlOp::until, {}, std::move(a), std::move(b)));
}
FormulaPtr Formula::release(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(LtlOp::release, {}, std::move(a), std::move(b)));
}
FormulaPtr Formula::eventually(FormulaPtr f) { return until(top(), std::move(f)); }
FormulaPtr Formula::globally(FormulaPtr f) { return release(bot(), std::move(f)); }
FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
  return lor(neg(std::move(a)), std::move(b));
}

namespace {

// Binding strength used by both the printer and the parser.
int prec(LtlOp op) {
  switch (op) {
    case LtlOp::top:
    case LtlOp::bot:
    case LtlOp::atom:
      return 5;
    case LtlOp::neg:
      return 4;
    case LtlOp::land:
      return 3;
    case LtlOp::lor:
      return 2;
    case LtlOp::until:
    case LtlOp::release:
      return 1;
  }
  return 0;
}

void print(const Formula& f, std::string& out) {
  auto child = [&out](const FormulaPtr& c, int min_prec) {
    bool parens = prec(c->op()) < min_prec;
    if (parens) out += '(';
    print(*c, out);
    if (parens) out += ')';
  };
  switch (f.op()) {
    case LtlOp::top:
      out += "true";
      break;
    case LtlOp::bot:
      out += "false";
      break;
    case LtlOp::atom:
      out += f.name();
      break;
    case LtlOp::neg:
      out += '!';
      child(f.lhs(), 4);
      break;
    case LtlOp::land:
      child(f.lhs(), 3);
      out += " & ";
      child(f.rhs(), 4);  // & parses left associative
      break;
    case LtlOp::lor:
      child(f.lhs(), 2);
      out += " | ";
      child(f.rhs(), 3);
      break;
    case LtlOp::until:
      child(f.lhs(), 2);  // U/R parse right associative
      out += " U ";
      child(f.rhs(), 1);
      break;
    case LtlOp::release:
      child(f.lhs(), 2);
      out += " R ";
      child(f.rhs(), 1);
      break;
  }
}

}  // namespace

std::string Formula::to_text() const {
  std::string out;
  print(*this, out);
  return out;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->op() != b->op()) return false;
  switch (a->op()) {
    case LtlOp::top:
    case LtlOp::bot:
      return true;
    case LtlOp::atom:
      return a->name() == b->name();
    case LtlOp::neg:
      return equal(a->lhs(), b->lhs());
    default:
      return equal(a->lhs(), b->lhs()) && equal(a->rhs(), b->rhs());
  }
}

std::vector<std::string> atoms_of(const FormulaPtr& f) {
  std::set<std::string> names;
  std::vector<const Formula*> stack{f.get()};
  while (!stack.empty()) {
    const Formula* n = stack.back();
    stack.pop_back();
    if (!n) continue;
    if (n->op() == LtlOp::atom) names.insert(n->name());
    stack.push_back(n->lhs().get());
    stack.push_back(n->rhs().get());
  }
  return {names.begin(), names.end()};
}

bool is_pnf(const FormulaPtr& f) {
  if (!f) return true;
  if (f->op() == LtlOp::neg) return f->lhs()->op() == LtlOp::atom;
  return is_pnf(f->lhs()) && is_pnf(f->rhs());
}

namespace {

FormulaPtr pnf(const FormulaPtr& f, bool negated) {
  switch (f->op()) {
    case LtlOp::top:
      return negated ? Formula::bot() : Formula::top();
    case LtlOp::bot:
      return negated ? Formula::top() : Formula::bot();
    case LtlOp::atom:
      return negated ? Formula::neg(f) : f;
    case LtlOp::neg:
      return pnf(f->lhs(), !negated);
    case LtlOp::land:
      return negated ? Formula::lor(pnf(f->lhs(), true), pnf(f->rhs(), true))
                     : Formula::land(pnf(f->lhs(), false), pnf(f->rhs(), false));
    case LtlOp::lor:
      return negated ? Formula::land(pnf(f->lhs(), true), pnf(f->rhs(), true))
                     : Formula::lor(pnf(f->lhs(), false), pnf(f->rhs(), false));
    case LtlOp::until:
      return negated ? Formula::release(pnf(f->lhs(), true), pnf(f->rhs(), true))
                     : Formula::until(pnf(f->lhs(), false), pnf(f->rhs(), false));
    case LtlOp::release:
      return negated ? Formula::until(pnf(f->lhs(), true), pnf(f->rhs(), true))
                     : Formula::release(pnf(f->lhs(), false), pnf(f->rhs(), false));
  }
  throw DomainError("unreachable formula op");
}

}  // namespace

FormulaPtr to_pnf(const FormulaPtr& f) { return pnf(f, false); }

// --- parser ------------------------------------------------------------------

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

struct FCursor {
  const std::string& s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool at_end() const { return i >= s.size(); }
  char peek() const { return i < s.size() ? s[i] : '\0'; }

  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1;
    std::size_t bol = 0;
    for (std::size_t k = 0; k < i && k < s.size(); ++k)
      if (s[k] == '\n') {
        ++line;
        bol = k + 1;
      }
    throw ParseError(msg, line, int(i - bol + 1));
  }

  // Reads an identifier without consuming; empty when none starts here.
  std::string peek_ident() const {
    if (i >= s.size() || !ident_start(s[i])) return {};
    std::size_t j = i;
    while (j < s.size() && ident_char(s[j])) ++j;
    return s.substr(i, j - i);
  }
};

FormulaPtr parse_implied(FCursor& c);

FormulaPtr parse_unary(FCursor& c) {
  c.skip_ws();
  if (c.at_end()) c.fail("expected a formula");
  char ch = c.peek();
  if (ch == '(') {
    ++c.i;
    FormulaPtr f = parse_implied(c);
    c.skip_ws();
    if (c.peek() != ')') c.fail("expected ')'");
    ++c.i;
    return f;
  }
  if (ch == '!') {
    ++c.i;
    return Formula::neg(parse_unary(c));
  }
  if (ch == '<') {
    ++c.i;
    if (c.peek() != '>') c.fail("expected '>' after '<'");
    ++c.i;
    return Formula::eventually(parse_unary(c));
  }
  if (ch == '[') {
    ++c.i;
    if (c.peek() != ']') c.fail("expected ']' after '['");
    ++c.i;
    return Formula::globally(parse_unary(c));
  }
  std::string id = c.peek_ident();
  if (id.empty()) c.fail("expected a formula");
  c.i += id.size();
  if (id == "true") return Formula::top();
  if (id == "false") return Formula::bot();
  if (id == "F") return Formula::eventually(parse_unary(c));
  if (id == "G") return Formula::globally(parse_unary(c));
  if (id == "U" || id == "R") {
    c.i -= id.size();
    c.fail("'" + id + "' is an operator, not an atom");
  }
  return Formula::atom(id);
}

FormulaPtr parse_conj(FCursor& c) {
  FormulaPtr f = parse_unary(c);
  while (true) {
    c.skip_ws();
    if (c.peek() != '&') return f;
    ++c.i;
    f = Formula::land(std::move(f), parse_unary(c));
  }
}

FormulaPtr parse_disj(FCursor& c) {
  FormulaPtr f = parse_conj(c);
  while (true) {
    c.skip_ws();
    if (c.peek() != '|') return f;
    ++c.i;
    f = Formula::lor(std::move(f), parse_conj(c));
  }
}

FormulaPtr parse_temporal(FCursor& c) {
  FormulaPtr f = parse_disj(c);
  c.skip_ws();
  std::string id = c.peek_ident();
  if (id == "U" || id == "R") {
    c.i += id.size();
    FormulaPtr rhs = parse_temporal(c);
    return id == "U" ? Formula::until(std::move(f), std::move(rhs))
                     : Formula::release(std::move(f), std::move(rhs));
  }
  return f;
}

FormulaPtr parse_implied(FCursor& c) {
  FormulaPtr f = parse_temporal(c);
  c.skip_ws();
  if (c.peek() == '-') {
    ++c.i;
    if (c.peek() != '>') c.fail("expected '>' after '-'");
    ++c.i;
    return Formula::implies(std::move(f), parse_implied(c));
  }
  return f;
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  FCursor c{text};
  FormulaPtr f = parse_implied(c);
  c.skip_ws();
  if (!c.at_end()) c.fail("unexpected trailing characters after formula");
  return f;
}

// --- words and evaluation ----------------------------------------------------

Word Word::make(std::vector<Letter> letters, std::optional<std::size_t> loop,
                std::set<std::string> ap) {
  if (letters.empty()) throw DomainError("a word needs at least one letter");
  if (loop && *loop + 1 >= letters.size())
    throw DomainError("loop index must precede the last letter");
  if (loop && letters[*loop] != letters.back())
    throw DomainError("loop letter must equal the last letter");
  for (const auto& letter : letters)
    for (const auto& name : letter)
      if (!ap.count(name))
        throw DomainError("letter mentions '" + name + "' outside the atom universe");
  Word w;
  w.letters = std::move(letters);
  w.loop = loop;
  w.ap = std::move(ap);
  return w;
}

namespace {

// Distinct subformula nodes in children-first order.
std::vector<const Formula*> postorder(const FormulaPtr& f) {
  std::vector<const Formula*> out;
  std::set<const Formula*> seen;
  std::vector<std::pair<const Formula*, bool>> stack{{f.get(), false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    stack.pop_back();
    if (!n || seen.count(n)) continue;
    if (expanded) {
      seen.insert(n);
      out.push_back(n);
      continue;
    }
    stack.push_back({n, true});
    stack.push_back({n->lhs().get(), false});
    stack.push_back({n->rhs().get(), false});
  }
  return out;
}

bool eval_finite(const FormulaPtr& f, const Word& w) {
  const std::size_t n = w.letters.size();
  std::vector<const Formula*> order = postorder(f);
  std::map<const Formula*, int> idx;
  for (std::size_t k = 0; k < order.size(); ++k) idx[order[k]] = int(k);
  // val[node][i] for i in 0..n; only U and R carry meaning at i == n.
  std::vector<std::vector<char>> val(order.size(), std::vector<char>(n + 1, 0));
  auto at = [&](const FormulaPtr& g, std::size_t i) -> char {
    return val[idx.at(g.get())][i];
  };
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Formula* node = order[k];
    for (std::size_t ii = n + 1; ii-- > 0;) {
      std::size_t i = ii;
      char v = 0;
      switch (node->op()) {
        case LtlOp::top:
          v = 1;
          break;
        case LtlOp::bot:
          v = 0;
          break;
        case LtlOp::atom:
          v = i < n && w.letters[i].count(node->name()) ? 1 : 0;
          break;
        case LtlOp::neg:
          v = i < n && !at(node->lhs(), i) ? 1 : 0;
          break;
        case LtlOp::land:
          v = i < n && at(node->lhs(), i) && at(node->rhs(), i) ? 1 : 0;
          break;
        case LtlOp::lor:
          v = i < n && (at(node->lhs(), i) || at(node->rhs(), i)) ? 1 : 0;
          break;
        case LtlOp::until:
          // U(i) = f2(i) or (f1(i) and U(i+1)); false past the end.
          v = i < n && (at(node->rhs(), i) ||
                        (at(node->lhs(), i) && val[k][i + 1]))
                  ? 1
                  : 0;
          break;
        case LtlOp::release:
          // R(i) = f2(i) and (f1(i) or R(i+1)); true past the end.
          v = i == n || (at(node->rhs(), i) &&
                         (at(node->lhs(), i) || val[k][i + 1]))
                  ? 1
                  : 0;
          break;
      }
      val[k][i] = v;
    }
  }
  return val[idx.at(f.get())][0] != 0;
}

// The loop letter equals the last letter, so after position last_ the word
// continues from position l_ + 1.
class LassoEval {
 public:
  explicit LassoEval(const Word& w)
      : w_(w), last_(w.letters.size() - 1), l_(*w.loop) {}

  bool at(const Formula* f, std::size_t i) {
    auto key = std::make_pair(f, i);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = compute(f, i);
    memo_[key] = v;
    return v;
  }

 private:
  std::size_t adv(std::size_t i) const { return i < last_ ? i + 1 : l_ + 1; }

  // Covers every position reachable from i plus one full extra cycle.
  std::size_t horizon(std::size_t i) const {
    return (last_ + 1 - i) + (last_ - l_);
  }

  bool compute(const Formula* f, std::size_t i) {
    switch (f->op()) {
      case LtlOp::top:
        return true;
      case LtlOp::bot:
        return false;
      case LtlOp::atom:
        return w_.letters[i].count(f->name()) != 0;
      case LtlOp::neg:
        return !at(f->lhs().get(), i);
      case LtlOp::land:
        return at(f->lhs().get(), i) && at(f->rhs().get(), i);
      case LtlOp::lor:
        return at(f->lhs().get(), i) || at(f->rhs().get(), i);
      case LtlOp::until: {
        // A witness past the horizon revisits a position, so an earlier
        // witness exists; the bounded scan is complete.
        std::size_t pos = i;
        for (std::size_t q = 0; q < horizon(i); ++q, pos = adv(pos)) {
          if (at(f->rhs().get(), pos)) return true;
          if (!at(f->lhs().get(), pos)) return false;
        }
        return false;
      }
      case LtlOp::release: {
        std::size_t pos = i;
        for (std::size_t q = 0; q < horizon(i); ++q, pos = adv(pos)) {
          if (!at(f->rhs().get(), pos)) return false;
          if (at(f->lhs().get(), pos)) return true;
        }
        return true;
      }
    }
    throw DomainError("unreachable formula op");
  }

  const Word& w_;
  std::size_t last_, l_;
  std::map<std::pair<const Formula*, std::size_t>, bool> memo_;
};

}  // namespace

bool eval(const FormulaPtr& f, const Word& w) {
  if (!f) throw DomainError("cannot evaluate a null formula");
  for (const auto& name : atoms_of(f))
    if (!w.ap.count(name))
      throw DomainError("formula atom '" + name +
                        "' is outside the word's atom universe");
  if (!w.infinite()) return eval_finite(f, w);
  LassoEval ev(w);
  return ev.at(f.get(), 0);
}

// --- stutter equivalence -----------------------------------------------------

namespace {

using Letters = std::vector<Word::Letter>;

Letters collapse(const Letters& in) {
  Letters out;
  for (const auto& letter : in)
    if (out.empty() || out.back() != letter) out.push_back(letter);
  return out;
}

// Normal form of the collapsed infinite word: shortest stem plus the
// primitive cycle in the phase the stem leaves it. Equal infinite collapsed
// words give equal pairs and vice versa.
std::pair<Letters, Letters> lasso_normal(const Word& w) {
  const std::size_t l = *w.loop;
  // letters[0..l] (letters[l+1..n])^omega; the cycle is nonempty since l < n.
  Letters s(w.letters.begin(), w.letters.begin() + l + 1);
  Letters v(w.letters.begin() + l + 1, w.letters.end());
  Letters cyc = collapse(v);
  if (cyc.size() >= 2 && cyc.front() == cyc.back()) cyc.pop_back();
  std::size_t L = cyc.size();
  for (std::size_t p = 1; p < cyc.size(); ++p) {
    if (cyc.size() % p) continue;
    bool periodic = true;
    for (std::size_t k = p; k < cyc.size() && periodic; ++k)
      periodic = cyc[k] == cyc[k % p];
    if (periodic) {
      L = p;
      break;
    }
  }
  if (L == 1) {
    // Ultimately constant word: the single-letter cycle absorbs the stem tail.
    Letters stem = s;
    stem.push_back(cyc[0]);
    stem = collapse(stem);
    stem.pop_back();
    return {std::move(stem), {cyc[0]}};
  }
  Letters unrolled = s;
  for (int copy = 0; copy < 4; ++copy)
    unrolled.insert(unrolled.end(), v.begin(), v.end());
  Letters u = collapse(unrolled);
  std::size_t m = u.size() - L;
  while (m > 0 && u[m - 1] == u[m - 1 + L]) --m;
  Letters stem(u.begin(), u.begin() + m);
  Letters cycle(u.begin() + m, u.begin() + m + L);
  return {std::move(stem), std::move(cycle)};
}

}  // namespace

bool stuttering_equivalent(const Word& a, const Word& b) {
  if (a.infinite() != b.infinite())
    throw DomainError("cannot compare a finite word with an infinite one");
  if (!a.infinite()) return collapse(a.letters) == collapse(b.letters);
  return lasso_normal(a) == lasso_normal(b);
}

}  // namespace stepbmc
