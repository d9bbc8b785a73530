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
#include <random>
#include <set>

#include "doctest.h"
#include "stepbmc/common.hpp"
#include "stepbmc/ltl.hpp"
#include "support/generators.hpp"

using namespace stepbmc;

namespace {

Word finite(std::vector<Word::Letter> letters, std::set<std::string> ap) {
  return Word::make(std::move(letters), {}, std::move(ap));
}

Word lasso(std::vector<Word::Letter> letters, std::size_t l,
           std::set<std::string> ap) {
  return Word::make(std::move(letters), l, std::move(ap));
}

// Random formula over the fixed word alphabet a0..a2.
FormulaPtr word_formula(std::mt19937& rng, std::size_t depth) {
  auto atom = [&] {
    return Formula::atom("a" + std::to_string(std::uniform_int_distribution<int>(
                                   0, 2)(rng)));
  };
  if (depth == 0 || std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
    switch (std::uniform_int_distribution<int>(0, 6)(rng)) {
      case 0:
        return Formula::top();
      case 1:
        return Formula::bot();
      default:
        return atom();
    }
  }
  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
      return Formula::neg(word_formula(rng, depth - 1));
    case 1:
      return Formula::land(word_formula(rng, depth - 1), word_formula(rng, depth - 1));
    case 2:
      return Formula::lor(word_formula(rng, depth - 1), word_formula(rng, depth - 1));
    case 3:
      return Formula::until(word_formula(rng, depth - 1), word_formula(rng, depth - 1));
    default:
      return Formula::release(word_formula(rng, depth - 1),
                              word_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parser shapes and precedence") {
  FormulaPtr f = parse_formula("[] !(cs1 & cs2)");
  CHECK(equal(f, Formula::globally(Formula::neg(
                     Formula::land(Formula::atom("cs1"), Formula::atom("cs2"))))));
  CHECK(equal(parse_formula("a U b U c"),
              Formula::until(Formula::atom("a"),
                             Formula::until(Formula::atom("b"), Formula::atom("c")))));
  CHECK_THROWS_AS(parse_formula("a U"), ParseError);
  CHECK(equal(parse_formula("!a & b | c"),
              Formula::lor(Formula::land(Formula::neg(Formula::atom("a")),
                                         Formula::atom("b")),
                           Formula::atom("c"))));
  CHECK(equal(parse_formula("a -> b"),
              Formula::implies(Formula::atom("a"), Formula::atom("b"))));
  CHECK(equal(parse_formula("<> p"), Formula::eventually(Formula::atom("p"))));
  CHECK(equal(parse_formula("F p"), Formula::eventually(Formula::atom("p"))));
  CHECK(equal(parse_formula("G p"), Formula::globally(Formula::atom("p"))));
}

TEST_CASE("formula text round-trips") {
  std::mt19937 rng(5);
  for (int it = 0; it < 100; ++it) {
    FormulaPtr f = word_formula(rng, 4);
    CHECK(equal(parse_formula(f->to_text()), f));
  }
}

TEST_CASE("positive normal form rewrites") {
  auto p = Formula::atom("p");
  auto q = Formula::atom("q");
  CHECK(equal(to_pnf(Formula::neg(Formula::neg(p))), p));
  CHECK(equal(to_pnf(Formula::neg(Formula::until(p, q))),
              Formula::release(Formula::neg(p), Formula::neg(q))));
  CHECK(equal(to_pnf(Formula::neg(Formula::lor(p, q))),
              Formula::land(Formula::neg(p), Formula::neg(q))));
  std::mt19937 rng(6);
  for (int it = 0; it < 200; ++it) CHECK(is_pnf(to_pnf(word_formula(rng, 4))));
}

TEST_CASE("eval on hand-computed words") {
  std::set<std::string> ap{"p", "q"};
  // Constant infinite word p p p ...
  Word wp = lasso({{"p"}, {"p"}}, 0, ap);
  CHECK(eval(Formula::globally(Formula::atom("p")), wp));
  CHECK(eval(Formula::eventually(Formula::atom("p")), wp));
  CHECK_FALSE(eval(Formula::eventually(Formula::atom("q")), wp));

  Word w2 = finite({{}, {"p"}}, ap);
  CHECK(eval(Formula::eventually(Formula::atom("p")), w2));
  CHECK_FALSE(eval(Formula::globally(Formula::atom("p")), w2));

  // Release without a left witness holds on a finite word iff the right
  // operand holds throughout.
  Word w3 = finite({{"q"}}, ap);
  CHECK(eval(Formula::release(Formula::atom("p"), Formula::atom("q")), w3));
  // Until needs its witness strictly inside the word.
  CHECK_FALSE(eval(Formula::until(Formula::atom("q"), Formula::atom("p")), w3));

  // p at the stem only: eventually yes, infinitely-often no.
  Word w4 = lasso({{"p"}, {"q"}, {"q"}}, 1, ap);
  CHECK(eval(Formula::eventually(Formula::atom("p")), w4));
  CHECK_FALSE(
      eval(Formula::globally(Formula::eventually(Formula::atom("p"))), w4));
  CHECK(eval(Formula::eventually(Formula::globally(Formula::atom("q"))), w4));
}

TEST_CASE("word construction validates the loop") {
  std::set<std::string> ap{"p"};
  CHECK_THROWS_AS(Word::make({{"p"}}, 0, ap), DomainError);       // l = n
  CHECK_THROWS_AS(Word::make({{"p"}, {}}, 0, ap), DomainError);   // stitch broken
  CHECK_THROWS_AS(Word::make({{"x"}}, {}, ap), DomainError);      // outside AP
  CHECK_THROWS_AS(eval(Formula::atom("z"), finite({{"p"}}, ap)), DomainError);
}

TEST_CASE("pnf preserves evaluation") {
  std::mt19937 rng(20260819);
  for (int it = 0; it < 400; ++it) {
    FormulaPtr f = word_formula(rng, 5);
    Word w = testsupport::random_word(rng, 3, 8, it % 2 == 0);
    CHECK(eval(f, w) == eval(to_pnf(f), w));
  }
}

TEST_CASE("until and release are duals") {
  std::mt19937 rng(77);
  for (int it = 0; it < 400; ++it) {
    FormulaPtr f1 = word_formula(rng, 3);
    FormulaPtr f2 = word_formula(rng, 3);
    Word w = testsupport::random_word(rng, 3, 8, it % 2 == 0);
    CHECK(eval(Formula::neg(Formula::until(f1, f2)), w) ==
          eval(Formula::release(Formula::neg(f1), Formula::neg(f2)), w));
  }
}

TEST_CASE("stuttering equivalence examples") {
  std::set<std::string> ap{"p", "q"};
  CHECK(stuttering_equivalent(finite({{"p"}, {"p"}, {"q"}}, ap),
                              finite({{"p"}, {"q"}}, ap)));
  CHECK_FALSE(stuttering_equivalent(finite({{"p"}, {"q"}}, ap),
                                    finite({{"q"}, {"p"}}, ap)));
  // Both collapse to p q^omega.
  CHECK(stuttering_equivalent(lasso({{"p"}, {"q"}, {"q"}}, 1, ap),
                              lasso({{"p"}, {"p"}, {"q"}, {"q"}}, 2, ap)));
  // (p q)^omega vs (q p)^omega differ in phase.
  CHECK_FALSE(stuttering_equivalent(lasso({{"p"}, {"q"}, {"p"}, {"q"}}, 1, ap),
                                    lasso({{"q"}, {"p"}, {"q"}}, 0, ap)));
  CHECK_THROWS_AS(stuttering_equivalent(finite({{"p"}}, ap),
                                        lasso({{"p"}, {"p"}}, 0, ap)),
                  DomainError);
}

TEST_CASE("stuttering equivalent words agree on formulas") {
  std::mt19937 rng(13);
  for (int it = 0; it < 300; ++it) {
    Word w = testsupport::random_word(rng, 3, 6, false);
    // Duplicate a random letter: a stutter step.
    std::vector<Word::Letter> dup = w.letters;
    std::size_t at = std::uniform_int_distribution<std::size_t>(
        0, dup.size() - 1)(rng);
    dup.insert(dup.begin() + std::ptrdiff_t(at), dup[at]);
    Word w2 = Word::make(std::move(dup), {}, w.ap);
    REQUIRE(stuttering_equivalent(w, w2));
    FormulaPtr f = word_formula(rng, 4);
    CHECK(eval(f, w) == eval(f, w2));
  }
}

TEST_CASE("lasso evaluation matches explicit unrolling on state formulas") {
  std::mt19937 rng(17);
  for (int it = 0; it < 200; ++it) {
    Word w = testsupport::random_word(rng, 3, 6, true);
    // State formulas look only at the first letter, so any unrolling depth
    // must agree with the lasso.
    FormulaPtr f = word_formula(rng, 2);
    while (true) {
      auto temporal_free = [](const FormulaPtr& g, auto&& self) -> bool {
        if (!g) return true;
        if (g->op() == LtlOp::until || g->op() == LtlOp::release) return false;
        return self(g->lhs(), self) && self(g->rhs(), self);
      };
      if (temporal_free(f, temporal_free)) break;
      f = word_formula(rng, 2);
    }
    std::size_t l = *w.loop;
    for (int k = 1; k <= 3; ++k) {
      std::vector<Word::Letter> unrolled = w.letters;
      for (int rep = 0; rep < k; ++rep)
        unrolled.insert(unrolled.end(), w.letters.begin() + std::ptrdiff_t(l) + 1,
                        w.letters.end());
      Word uw = Word::make(std::move(unrolled), {}, w.ap);
      CHECK(eval(f, w) == eval(f, uw));
    }
  }
}

TEST_CASE("atoms_of collects places and ignores constants") {
  CHECK(atoms_of(Formula::globally(Formula::neg(Formula::atom("p5")))) ==
        std::vector<std::string>{"p5"});
  CHECK(atoms_of(Formula::top()).empty());
  CHECK(atoms_of(Formula::land(
            Formula::until(Formula::atom("p"), Formula::atom("q")),
            Formula::neg(Formula::atom("p")))) ==
        std::vector<std::string>{"p", "q"});
}
