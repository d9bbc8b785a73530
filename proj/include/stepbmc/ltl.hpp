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
#ifndef STEPBMC_LTL_HPP_
#define STEPBMC_LTL_HPP_

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace stepbmc {

// Linear-time temporal logic without a next-time operator, interpreted over
// finite words and over infinite words given in lasso form. Formulas are
// immutable trees shared by pointer; U and R are the primitive temporal
// operators, eventually/globally/implies are constructor sugar.

enum class LtlOp { top, bot, atom, neg, lor, land, until, release };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
 public:
  static FormulaPtr top();
  static FormulaPtr bot();
  static FormulaPtr atom(std::string name);
  static FormulaPtr neg(FormulaPtr f);
  static FormulaPtr lor(FormulaPtr a, FormulaPtr b);
  static FormulaPtr land(FormulaPtr a, FormulaPtr b);
  static FormulaPtr until(FormulaPtr a, FormulaPtr b);
  static FormulaPtr release(FormulaPtr a, FormulaPtr b);
  static FormulaPtr eventually(FormulaPtr f);  // true U f
  static FormulaPtr globally(FormulaPtr f);    // false R f
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b);

  LtlOp op() const { return op_; }
  const std::string& name() const { return name_; }  // atom only
  const FormulaPtr& lhs() const { return lhs_; }     // neg uses lhs
  const FormulaPtr& rhs() const { return rhs_; }

  // Canonical core syntax; reparsing yields a structurally equal formula.
  std::string to_text() const;

 private:
  Formula(LtlOp op, std::string name, FormulaPtr lhs, FormulaPtr rhs)
      : op_(op), name_(std::move(name)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
  LtlOp op_;
  std::string name_;
  FormulaPtr lhs_, rhs_;
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Sorted distinct atom names occurring in f.
std::vector<std::string> atoms_of(const FormulaPtr& f);

// True when every negation in f sits directly on an atom.
bool is_pnf(const FormulaPtr& f);

// Pushes negations down to the atoms via the usual dualities; U and R are
// duals, as are top/bot and the lattice connectives.
FormulaPtr to_pnf(const FormulaPtr& f);

// Parses the concrete syntax. Binding, tightest first: ! (also F, G, <>, []),
// &, |, then U/R (right associative, one level), then -> (right associative).
// true/false are constants; F/G/<>/[] and -> desugar during parsing. The
// names true, false, U, R, F and G are reserved and unavailable as atoms.
// Throws ParseError on malformed input.
FormulaPtr parse_formula(const std::string& text);

// A word over subsets of the atom universe `ap`. `loop` absent means a finite
// word. With loop = l present the word is infinite: the letter at l equals
// the last letter (the lasso stitch), and after the last letter the word
// resumes at index l + 1, i.e. letters[0..n] (letters[l+1..n])^omega.
struct Word {
  using Letter = std::set<std::string>;
  std::vector<Letter> letters;
  std::optional<std::size_t> loop;
  std::set<std::string> ap;

  // Validates: at least one letter, loop (if any) satisfies l < |letters|-1
  // and letters[l] == letters.back(), letters within ap. Throws DomainError
  // otherwise.
  static Word make(std::vector<Letter> letters, std::optional<std::size_t> loop,
                   std::set<std::string> ap);

  bool infinite() const { return loop.has_value(); }
};

// Satisfaction at the first position. Finite words use the finite-trace
// reading: U needs a witness inside the word and R reduces to its right
// operand at the last position; lasso words use the standard infinite-word
// semantics on the unrolling. Every atom of f must lie within the word's
// atom universe; otherwise DomainError.
bool eval(const FormulaPtr& f, const Word& w);

// Stutter equivalence. Finite words compare by their collapsed letter
// sequences; lasso words by the canonical shortest-stem, primitive-cycle
// normal form of their collapsed infinite words. Comparing a finite word
// with an infinite one is a DomainError.
bool stuttering_equivalent(const Word& a, const Word& b);

}  // namespace stepbmc

#endif  // STEPBMC_LTL_HPP_
