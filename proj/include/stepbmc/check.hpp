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
// Orchestration: iterate bounds, assemble programs, solve, decode, verify,
// report. Every reported counterexample has been replayed against the net
// and checked against the independent semantic evaluator; a check failure
// raises VerificationError instead of producing a false verdict.
#ifndef STEPBMC_CHECK_HPP_
#define STEPBMC_CHECK_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "stepbmc/condition.hpp"
#include "stepbmc/encode.hpp"
#include "stepbmc/ltl.hpp"
#include "stepbmc/net.hpp"

namespace stepbmc {

enum class Mode { deadlock, reach, ltl };

struct CheckRequest {
  Net net;
  Mode mode = Mode::deadlock;
  // Null means: exactly the declared initial marking.
  ConditionPtr initial;
  ConditionPtr target;  // reach mode
  FormulaPtr formula;   // ltl mode: the specification to refute
  Semantics semantics = Semantics::step;
  // Bounds are tried in order min..max; 0 is answered by the search oracle
  // directly (reach and deadlock only), encoded bounds start at 1.
  std::size_t bound_min = 1;
  std::size_t bound_max = 1;
  std::uint64_t solver_budget = 0;        // solver decisions per bound; 0 = unlimited
  std::size_t oracle_budget = 1 << 22;    // oracle nodes (bound-0 path, extensions)
  bool staged_atoms = false;              // drop unreachable-atom rules before solving
};

enum class Verdict { counterexample, no_cex_within_bound, budget_exceeded };

// replay_ok: the decoded execution fired correctly step by step.
// oracle_semantics_ok: the independent evaluator confirmed the target
// (condition / deadlock / formula on the induced word or its extensions).
// semantics_cautious: a non-maximal counterexample whose extension space
// exceeded the oracle budget; replay-verified only.
struct Verification {
  bool replay_ok = false;
  bool oracle_semantics_ok = false;
  bool semantics_cautious = false;
};

struct Report {
  Verdict verdict = Verdict::no_cex_within_bound;
  std::optional<std::size_t> bound_found;
  std::optional<StepExecution> execution;
  std::optional<Counterexample::Shape> shape;  // ltl and deadlock modes
  std::optional<std::size_t> loop_index;       // set iff shape == loop
  Verification verification;
  std::size_t rules = 0;  // of the last program built
  std::size_t atoms = 0;
  std::uint64_t decisions = 0;  // summed over the tried bounds
  double seconds = 0.0;
};

// Mode-specific drivers; run_check dispatches on req.mode. All three:
// for each bound, assemble initial-condition rules, the execution program
// and the mode's target program (plus the interleaving restriction when
// requested), solve, decode, verify, and stop at the first verified
// counterexample. Throw ParseError/DomainError on bad requests and
// VerificationError when a model fails its independent check.
Report run_deadlock(const CheckRequest& req);
Report run_reach(const CheckRequest& req);
Report run_ltl(const CheckRequest& req);
Report run_check(const CheckRequest& req);

// Writes the assembled ground program for the range minimum bound (>= 1)
// in the documented text format; byte-stable across runs.
void export_program(const CheckRequest& req, const std::string& path);

// Writes the k-philosopher benchmark net (k >= 2) in the net file format.
void gen_benchmark(std::size_t k, const std::string& path);

// Rendering. Text is line oriented; JSON follows schema 1 with executions
// as alternating marking/step arrays of sorted identifier lists.
std::string report_to_text(const Report& r, const Net& net);
std::string report_to_json(const Report& r, const Net& net);

}  // namespace stepbmc

#endif  // STEPBMC_CHECK_HPP_
