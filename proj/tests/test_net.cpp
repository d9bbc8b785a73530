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
#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "stepbmc/common.hpp"
#include "stepbmc/condition.hpp"
#include "stepbmc/net.hpp"
#include "support/generators.hpp"

using namespace stepbmc;
using testsupport::random_one_safe_net;
using testsupport::running_net;

namespace {

Marking mk(const Net& net, const std::vector<std::string>& names) {
  return net.marking_of(names);
}

int tix(const Net& net, const std::string& name) {
  int t = net.transition_index(name);
  REQUIRE(t >= 0);
  return t;
}

// All steps firable at m: singletons under interleaving, every preset-disjoint
// nonempty subset of the enabled transitions under step semantics.
std::vector<std::vector<int>> steps_at(const Net& net, const Marking& m,
                                       Semantics sem) {
  std::vector<int> en = enabled_set(net, m);
  std::vector<std::vector<int>> out;
  if (sem == Semantics::interleaving) {
    for (int t : en) out.push_back({t});
    return out;
  }
  for (unsigned mask = 1; mask < (1u << en.size()); ++mask) {
    std::vector<int> s;
    for (std::size_t i = 0; i < en.size(); ++i)
      if (mask >> i & 1u) s.push_back(en[i]);
    if (is_step(net, m, s)) out.push_back(std::move(s));
  }
  return out;
}

std::set<Marking> reachable(const Net& net, Semantics sem) {
  std::set<Marking> seen{net.initial};
  std::vector<Marking> frontier{net.initial};
  while (!frontier.empty()) {
    std::vector<Marking> next;
    for (const auto& m : frontier)
      for (const auto& s : steps_at(net, m, sem)) {
        Marking nm = fire_step(net, m, s);
        if (seen.insert(nm).second) next.push_back(nm);
      }
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace

TEST_CASE("net files parse to the documented structure") {
  Net net = running_net();
  CHECK(net.nplaces() == 5);
  CHECK(net.ntransitions() == 5);
  CHECK(net.initial == mk(net, {"p1", "p2"}));
  // Flow spot checks: t2 consumes p1 and p2 and produces p3 and p4.
  int t2 = tix(net, "t2");
  CHECK(net.pre[std::size_t(t2)] == mk(net, {"p1", "p2"}));
  CHECK(net.post[std::size_t(t2)] == mk(net, {"p3", "p4"}));

  Net back = parse_net(net_to_text(net));
  CHECK(back.places == net.places);
  CHECK(back.transitions == net.transitions);
  CHECK(back.pre == net.pre);
  CHECK(back.post == net.post);
  CHECK(back.initial == net.initial);
}

TEST_CASE("net file errors") {
  // A transition needs at least one input arc.
  CHECK_THROWS_AS(parse_net("place p\ntrans t\narc t p\ninit p\n"), ParseError);
  // ... and at least one output arc.
  CHECK_THROWS_AS(parse_net("place p\ntrans t\narc p t\ninit p\n"), ParseError);
  CHECK_THROWS_AS(parse_net("place p1\nplace p1\n"), ParseError);
  CHECK_THROWS_AS(parse_net("place p\ntrans t\narc p q\n"), ParseError);
  // Arcs connect a place with a transition, never two of a kind.
  CHECK_THROWS_AS(parse_net("place p\nplace q\ntrans t\narc p q\narc p t\narc t q\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_net("place p\nfoo p\n"), ParseError);
  // Names the program text reserves for bookkeeping atoms are refused.
  CHECK_THROWS_AS(parse_net("place idle\ntrans t\narc idle t\narc t idle\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_net("place _x\ntrans t\narc _x t\narc t _x\n"), ParseError);
  CHECK_THROWS_AS(running_net().marking_of({"nope"}), DomainError);
}

TEST_CASE("enabling and firing") {
  Net net = running_net();
  Marking m0 = net.initial;
  CHECK(enabled(net, m0, tix(net, "t2")));
  CHECK_FALSE(enabled(net, m0, tix(net, "t1")));
  Marking empty(net.nplaces());
  for (std::size_t t = 0; t < net.ntransitions(); ++t)
    CHECK_FALSE(enabled(net, empty, int(t)));

  CHECK(fire(net, m0, tix(net, "t2")) == mk(net, {"p3", "p4"}));
  CHECK_THROWS_AS(fire(net, m0, tix(net, "t1")), DomainError);
  CHECK(fire(net, mk(net, {"p2"}), tix(net, "t3")) == mk(net, {"p4"}));
}

TEST_CASE("concurrent steps") {
  Net net = running_net();
  Marking m0 = net.initial;
  Marking m34 = mk(net, {"p3", "p4"});
  int t1 = tix(net, "t1"), t2 = tix(net, "t2"), t3 = tix(net, "t3"),
      t4 = tix(net, "t4"), t5 = tix(net, "t5");

  CHECK(is_step(net, m34, {t1, t4}));
  CHECK_FALSE(is_step(net, m0, {t2, t3}));  // both consume p2
  CHECK(is_step(net, m0, {t5}));

  CHECK(fire_step(net, m34, {t1, t4}) == m0);
  CHECK(fire_step(net, m0, {}) == m0);
  CHECK(fire_step(net, m0, {t5}) == mk(net, {"p1", "p5"}));
  CHECK_THROWS_AS(fire_step(net, m0, {t2, t3}), DomainError);
}

TEST_CASE("deadlock detection") {
  Net net = running_net();
  CHECK(deadlocked(net, mk(net, {"p1", "p5"})));
  CHECK_FALSE(deadlocked(net, net.initial));
  CHECK(deadlocked(net, Marking(net.nplaces())));
}

TEST_CASE("exhaustive safety audit") {
  Net net = running_net();
  OneSafeReport rep = assert_one_safe(net);
  CHECK(rep.status == OneSafeReport::Status::one_safe);
  CHECK(rep.reachable_count > 0);

  // Two producers feed q while q is already marked: the very first firing
  // would put a second token on q.
  Net bad = parse_net(
      "place p\nplace pp\nplace q\n"
      "trans t\ntrans u\n"
      "arc p t\narc t q\narc pp u\narc u q\n"
      "init p\ninit pp\ninit q\n");
  OneSafeReport viol = assert_one_safe(bad);
  CHECK(viol.status == OneSafeReport::Status::violation);
  REQUIRE(viol.witness.has_value());
  CHECK(viol.witness->markings.size() == 1);
  CHECK(viol.witness->markings[0] == bad.initial);
  REQUIRE(viol.witness_transition >= 0);
  // The reported firing really does double-mark a place.
  const Marking& at = viol.witness->markings.back();
  std::size_t wt = std::size_t(viol.witness_transition);
  CHECK(enabled(bad, at, viol.witness_transition));
  CHECK((at - bad.pre[wt]).intersects(bad.post[wt]));

  CHECK(assert_one_safe(net, 1).status == OneSafeReport::Status::inconclusive);
}

TEST_CASE("bounded reachability oracle") {
  Net net = running_net();
  ConditionPtr c0 = exact_marking_condition(net, net.initial);

  SearchOutcome dead = oracle_search(
      net, c0, [&](const Marking& m) { return deadlocked(net, m); }, 1,
      Semantics::step);
  REQUIRE(dead.status == SearchOutcome::Status::found);
  REQUIRE(dead.execution.has_value());
  CHECK(dead.execution->steps == std::vector<std::vector<int>>{{tix(net, "t5")}});
  CHECK(dead.execution->markings.back() == mk(net, {"p1", "p5"}));

  SearchOutcome self = oracle_search(
      net, c0, [&](const Marking& m) { return m == net.initial; }, 0,
      Semantics::step);
  REQUIRE(self.status == SearchOutcome::Status::found);
  CHECK(self.execution->steps.empty());
  CHECK(self.execution->markings == std::vector<Marking>{net.initial});

  ConditionPtr p2p5 = parse_condition("p2 & p5");
  SearchOutcome absent = oracle_search(
      net, c0, [&](const Marking& m) { return eval_condition(p2p5, net, m); }, 5,
      Semantics::step);
  CHECK(absent.status == SearchOutcome::Status::absent);

  SearchOutcome clipped = oracle_search(
      net, c0, [&](const Marking& m) { return eval_condition(p2p5, net, m); }, 5,
      Semantics::step, 2);
  CHECK(clipped.status == SearchOutcome::Status::budget_exceeded);
}

TEST_CASE("ltl witness oracle") {
  Net net = running_net();

  LtlOracleOutcome dead =
      oracle_ltl_counterexample(net, parse_formula("<> p5"), 1);
  REQUIRE(dead.status == LtlOracleOutcome::Status::found);
  REQUIRE(dead.witness.has_value());
  CHECK_FALSE(dead.witness->loop.has_value());
  CHECK(dead.witness->execution.steps ==
        std::vector<std::vector<int>>{{tix(net, "t5")}});

  LtlOracleOutcome loop =
      oracle_ltl_counterexample(net, parse_formula("[] !p5"), 3);
  REQUIRE(loop.status == LtlOracleOutcome::Status::found);
  REQUIRE(loop.witness.has_value());
  REQUIRE(loop.witness->loop.has_value());
  CHECK(*loop.witness->loop == 0);
  const StepExecution& ex = loop.witness->execution;
  CHECK(ex.markings.front() == net.initial);
  CHECK(ex.markings.back() == ex.markings[*loop.witness->loop]);
  int p5 = net.place_index("p5");
  for (const auto& m : ex.markings) CHECK_FALSE(m.test(std::size_t(p5)));

  LtlOracleOutcome absent =
      oracle_ltl_counterexample(net, parse_formula("<> (p2 & p5)"), 4);
  CHECK(absent.status == LtlOracleOutcome::Status::absent);
}

TEST_CASE("philosopher benchmark family") {
  Net dp2 = dining_philosophers(2);
  CHECK(dp2.nplaces() == 8);
  CHECK(dp2.ntransitions() == 6);
  CHECK_THROWS_AS(dining_philosophers(1), DomainError);
  for (std::size_t k = 2; k <= 8; ++k)
    CHECK(assert_one_safe(dining_philosophers(k)).status ==
          OneSafeReport::Status::one_safe);
}

TEST_CASE("philosopher deadlock bounds by semantics") {
  Net dp = dining_philosophers(6);
  ConditionPtr c0 = exact_marking_condition(dp, dp.initial);
  auto dead = [&](const Marking& m) { return deadlocked(dp, m); };

  CHECK(oracle_search(dp, c0, dead, 0, Semantics::step).status ==
        SearchOutcome::Status::absent);
  SearchOutcome st = oracle_search(dp, c0, dead, 1, Semantics::step);
  REQUIRE(st.status == SearchOutcome::Status::found);
  CHECK(st.execution->length() == 1);
  CHECK(st.execution->steps[0].size() == 6);  // all six grab a left fork at once

  CHECK(oracle_search(dp, c0, dead, 5, Semantics::interleaving).status ==
        SearchOutcome::Status::absent);
  SearchOutcome in = oracle_search(dp, c0, dead, 6, Semantics::interleaving);
  REQUIRE(in.status == SearchOutcome::Status::found);
  CHECK(in.execution->length() == 6);
}

TEST_CASE("step firing is order independent") {
  std::mt19937 rng(101);
  for (int it = 0; it < 60; ++it) {
    Net net = random_one_safe_net(rng);
    Marking m = net.initial;
    for (int hop = 0; hop < 4; ++hop) {
      auto steps = steps_at(net, m, Semantics::step);
      if (steps.empty()) break;
      const auto& s = steps[std::uniform_int_distribution<std::size_t>(
          0, steps.size() - 1)(rng)];
      Marking at_once = fire_step(net, m, s);
      for (int shuffles = 0; shuffles < 3; ++shuffles) {
        std::vector<int> order = s;
        std::shuffle(order.begin(), order.end(), rng);
        Marking seq = m;
        for (int t : order) seq = fire(net, seq, t);
        CHECK(seq == at_once);
      }
      m = at_once;
    }
  }
}

TEST_CASE("step and interleaving reach the same markings") {
  std::mt19937 rng(202);
  for (int it = 0; it < 40; ++it) {
    Net net = random_one_safe_net(rng);
    CHECK(reachable(net, Semantics::step) ==
          reachable(net, Semantics::interleaving));
  }
}

TEST_CASE("interleaving reachability within n implies step reachability within n") {
  std::mt19937 rng(303);
  for (int it = 0; it < 30; ++it) {
    Net net = random_one_safe_net(rng);
    ConditionPtr c0 = exact_marking_condition(net, net.initial);
    // Interleaving BFS, tagging each marking with its first-visit depth.
    std::map<Marking, std::size_t> depth{{net.initial, 0}};
    std::vector<Marking> frontier{net.initial};
    for (std::size_t d = 1; d <= 3 && !frontier.empty(); ++d) {
      std::vector<Marking> next;
      for (const auto& m : frontier)
        for (int t : enabled_set(net, m)) {
          Marking nm = fire(net, m, t);
          if (depth.emplace(nm, d).second) next.push_back(nm);
        }
      frontier = std::move(next);
    }
    std::size_t sampled = 0;
    for (const auto& [m, d] : depth) {
      if (sampled++ == 5) break;
      SearchOutcome got = oracle_search(
          net, c0, [&](const Marking& x) { return x == m; }, d, Semantics::step);
      REQUIRE(got.status == SearchOutcome::Status::found);
      CHECK(got.execution->length() <= d);
    }
  }
}

TEST_CASE("interleaving oracle fires one transition at a time") {
  std::mt19937 rng(404);
  for (int it = 0; it < 30; ++it) {
    Net net = random_one_safe_net(rng);
    ConditionPtr goal = testsupport::random_condition(rng, net);
    SearchOutcome got = oracle_search(
        net, exact_marking_condition(net, net.initial),
        [&](const Marking& m) { return eval_condition(goal, net, m); }, 4,
        Semantics::interleaving);
    if (got.status != SearchOutcome::Status::found) continue;
    for (const auto& s : got.execution->steps) CHECK(s.size() <= 1);
  }
}
