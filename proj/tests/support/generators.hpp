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
// Deterministic random instances for the property suites. All generators
// take the caller's engine so each test fixes its own seed.
#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "stepbmc/asp.hpp"
#include "stepbmc/condition.hpp"
#include "stepbmc/ltl.hpp"
#include "stepbmc/net.hpp"

namespace stepbmc::testsupport {

// The five-place worked example used throughout the docs:
// t1: p3->p1, t2: p1,p2->p3,p4, t3: p2->p4, t4: p4->p2, t5: p2->p5,
// initially p1, p2.
Net running_net();

// Random net with 1..max_places places and 1..max_transitions transitions,
// every transition given nonempty pre- and postsets and a random initial
// marking. Not necessarily 1-safe.
Net random_net(std::mt19937& rng, std::size_t max_places = 6,
               std::size_t max_transitions = 6);

// Rejection-samples random_net until the exhaustive audit certifies
// 1-safety.
Net random_one_safe_net(std::mt19937& rng, std::size_t max_places = 6,
                        std::size_t max_transitions = 6);

// Random condition tree over the net's places.
ConditionPtr random_condition(std::mt19937& rng, const Net& net,
                              std::size_t depth = 3);

// Random formula over the net's places, arbitrary negation placement.
FormulaPtr random_formula(std::mt19937& rng, const Net& net,
                          std::size_t depth = 3);

// Random word over atom names a0..a(nap-1): length 1..max_len letters, with
// a loop (stitch repaired to keep the word well formed) when with_loop.
Word random_word(std::mt19937& rng, std::size_t nap, std::size_t max_len,
                 bool with_loop);

// Random ground program over plain atoms a0..a(natoms-1): a mix of the four
// rule kinds, duplicate-free bodies.
GroundProgram random_program(std::mt19937& rng, std::size_t max_atoms = 12,
                             std::size_t max_rules = 25);

// The nested-until specification for the k-philosopher net: the negation of
//   [] <> ( fork_j U (eat_j & ( fork_{j-2} U ( ... (fork_1 U eat_1) ...))))
// chained over the odd indices below k in descending order.
FormulaPtr nested_until_spec(std::size_t k);

}  // namespace stepbmc::testsupport
