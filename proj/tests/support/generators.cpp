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
#include "support/generators.hpp"

#include <algorithm>
#include <set>

#include "stepbmc/common.hpp"

namespace stepbmc::testsupport {

namespace {

std::size_t pick(std::mt19937& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Distinct random indices, count in [lo, hi], from [0, n).
std::vector<std::size_t> subset(std::mt19937& rng, std::size_t n, std::size_t lo,
                                std::size_t hi) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(n, pick(rng, lo, std::min(hi, n))));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

Net running_net() {
  return parse_net(
      "place p1\nplace p2\nplace p3\nplace p4\nplace p5\n"
      "trans t1\ntrans t2\ntrans t3\ntrans t4\ntrans t5\n"
      "arc p3 t1\narc p1 t2\narc p2 t2\narc p2 t3\narc p4 t4\narc p2 t5\n"
      "arc t1 p1\narc t2 p3\narc t2 p4\narc t3 p4\narc t4 p2\narc t5 p5\n"
      "init p1\ninit p2\n");
}

Net random_net(std::mt19937& rng, std::size_t max_places,
               std::size_t max_transitions) {
  Net net;
  std::size_t np = pick(rng, 1, max_places);
  std::size_t nt = pick(rng, 1, max_transitions);
  for (std::size_t i = 0; i < np; ++i) net.places.push_back("q" + std::to_string(i));
  for (std::size_t i = 0; i < nt; ++i)
    net.transitions.push_back("u" + std::to_string(i));
  net.pre.assign(nt, Marking(np));
  net.post.assign(nt, Marking(np));
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t p : subset(rng, np, 1, 3)) net.pre[t].set(p);
    for (std::size_t p : subset(rng, np, 1, 3)) net.post[t].set(p);
  }
  net.initial = Marking(np);
  for (std::size_t p : subset(rng, np, 1, np)) net.initial.set(p);
  net.validate();
  return net;
}

Net random_one_safe_net(std::mt19937& rng, std::size_t max_places,
                        std::size_t max_transitions) {
  for (;;) {
    Net net = random_net(rng, max_places, max_transitions);
    if (assert_one_safe(net).status == OneSafeReport::Status::one_safe) return net;
  }
}

ConditionPtr random_condition(std::mt19937& rng, const Net& net,
                              std::size_t depth) {
  if (depth == 0 || pick(rng, 0, 3) == 0)
    return Condition::atom(net.places[pick(rng, 0, net.nplaces() - 1)]);
  switch (pick(rng, 0, 2)) {
    case 0:
      return Condition::neg(random_condition(rng, net, depth - 1));
    case 1:
      return Condition::land(random_condition(rng, net, depth - 1),
                             random_condition(rng, net, depth - 1));
    default:
      return Condition::lor(random_condition(rng, net, depth - 1),
                            random_condition(rng, net, depth - 1));
  }
}

FormulaPtr random_formula(std::mt19937& rng, const Net& net, std::size_t depth) {
  if (depth == 0 || pick(rng, 0, 4) == 0) {
    switch (pick(rng, 0, 7)) {
      case 0:
        return Formula::top();
      case 1:
        return Formula::bot();
      default:
        return Formula::atom(net.places[pick(rng, 0, net.nplaces() - 1)]);
    }
  }
  switch (pick(rng, 0, 4)) {
    case 0:
      return Formula::neg(random_formula(rng, net, depth - 1));
    case 1:
      return Formula::land(random_formula(rng, net, depth - 1),
                           random_formula(rng, net, depth - 1));
    case 2:
      return Formula::lor(random_formula(rng, net, depth - 1),
                          random_formula(rng, net, depth - 1));
    case 3:
      return Formula::until(random_formula(rng, net, depth - 1),
                            random_formula(rng, net, depth - 1));
    default:
      return Formula::release(random_formula(rng, net, depth - 1),
                              random_formula(rng, net, depth - 1));
  }
}

Word random_word(std::mt19937& rng, std::size_t nap, std::size_t max_len,
                 bool with_loop) {
  std::set<std::string> ap;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nap; ++i) {
    names.push_back("a" + std::to_string(i));
    ap.insert(names.back());
  }
  std::size_t len = pick(rng, with_loop ? 2 : 1, std::max<std::size_t>(2, max_len));
  std::vector<Word::Letter> letters(len);
  for (auto& letter : letters)
    for (const auto& name : names)
      if (pick(rng, 0, 1)) letter.insert(name);
  std::optional<std::size_t> loop;
  if (with_loop) {
    loop = pick(rng, 0, len - 2);
    letters.back() = letters[*loop];
  }
  return Word::make(std::move(letters), loop, std::move(ap));
}

GroundProgram random_program(std::mt19937& rng, std::size_t max_atoms,
                             std::size_t max_rules) {
  std::size_t natoms = pick(rng, 1, max_atoms);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < natoms; ++i)
    atoms.push_back(Atom::named("a" + std::to_string(i)));
  auto some_atoms = [&](std::size_t lo, std::size_t hi) {
    std::vector<Atom> out;
    for (std::size_t i : subset(rng, natoms, lo, hi)) out.push_back(atoms[i]);
    return out;
  };
  GroundProgram prog;
  std::size_t nrules = pick(rng, 0, max_rules);
  for (std::size_t r = 0; r < nrules; ++r) {
    switch (pick(rng, 0, 3)) {
      case 0:
        prog.add(Rule::normal(atoms[pick(rng, 0, natoms - 1)], some_atoms(0, 2),
                              some_atoms(0, 2)));
        break;
      case 1:
        prog.add(Rule::constraint(some_atoms(0, 2), some_atoms(0, 2)));
        break;
      case 2:
        prog.add(Rule::choice(atoms[pick(rng, 0, natoms - 1)], some_atoms(0, 2),
                              some_atoms(0, 1)));
        break;
      default: {
        std::vector<Atom> list = some_atoms(2, 4);
        if (list.size() >= 2)
          prog.add(Rule::conflict(std::move(list)));
        else
          prog.add(Rule::fact(atoms[pick(rng, 0, natoms - 1)]));
        break;
      }
    }
  }
  return prog;
}

FormulaPtr nested_until_spec(std::size_t k) {
  if (k < 2) throw DomainError("nested_until_spec needs k >= 2");
  FormulaPtr chain;
  // Ascending build so the innermost pair uses index 1.
  for (std::size_t j = 1; j < k; j += 2) {
    FormulaPtr eat = Formula::atom("eat_" + std::to_string(j));
    FormulaPtr fork = Formula::atom("fork_" + std::to_string(j));
    chain = chain ? Formula::until(fork, Formula::land(eat, chain))
                  : Formula::until(fork, eat);
  }
  return Formula::neg(Formula::globally(Formula::eventually(chain)));
}

}  // namespace stepbmc::testsupport
