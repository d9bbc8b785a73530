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
#include "stepbmc/check.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stepbmc/common.hpp"
#include "stepbmc/solver.hpp"

namespace stepbmc {

namespace {

ConditionPtr initial_condition(const CheckRequest& req) {
  if (req.initial) return req.initial;
  return exact_marking_condition(req.net, req.net.initial);
}

void validate_request(const CheckRequest& req) {
  if (req.bound_min > req.bound_max)
    throw DomainError("empty bound range");
  switch (req.mode) {
    case Mode::deadlock:
      break;
    case Mode::reach:
      if (!req.target) throw DomainError("reach mode needs a target condition");
      break;
    case Mode::ltl:
      if (!req.formula) throw DomainError("ltl mode needs a formula");
      if (req.bound_min < 1)
        throw DomainError("ltl bounds start at 1");
      break;
  }
  if (req.staged_atoms && req.initial)
    throw DomainError("staged atoms need the default initial condition");
}

// The counterexample formula: the specification, negated, negations pushed in.
FormulaPtr refutation_target(const CheckRequest& req) {
  if (req.mode != Mode::ltl) return nullptr;
  return to_pnf(Formula::neg(req.formula));
}

GroundProgram assemble(const CheckRequest& req, const FormulaPtr& f, int n) {
  GroundProgram prog = encode_condition(initial_condition(req), 0, req.net);
  prog.append(encode_executions(req.net, n));
  switch (req.mode) {
    case Mode::deadlock:
      prog.append(encode_deadlock(req.net, n));
      break;
    case Mode::reach:
      prog.append(encode_condition(req.target, n, req.net));
      break;
    case Mode::ltl:
      prog.append(encode_live(req.net, n));
      prog.append(encode_ltl(f, req.net, n));
      break;
  }
  if (req.semantics == Semantics::interleaving)
    prog.append(encode_interleaving(req.net, n));
  if (req.staged_atoms) prog = stage_atoms(prog, req.net, n);
  return prog;
}

// Empty steps can only pad the front of a decoded execution; reach and
// deadlock reports drop that padding.
void strip_idle_prefix(StepExecution& ex) {
  std::size_t k = 0;
  while (k < ex.steps.size() && ex.steps[k].empty()) ++k;
  ex.markings.erase(ex.markings.begin(), ex.markings.begin() + std::ptrdiff_t(k));
  ex.steps.erase(ex.steps.begin(), ex.steps.begin() + std::ptrdiff_t(k));
}

Word word_of(const Net& net, const std::vector<Marking>& markings,
             std::optional<std::size_t> loop, const FormulaPtr& f) {
  std::vector<std::string> names = atoms_of(f);
  std::set<std::string> ap(names.begin(), names.end());
  std::vector<Word::Letter> letters;
  letters.reserve(markings.size());
  for (const Marking& m : markings) {
    Word::Letter letter;
    for (const std::string& name : names)
      if (m[std::size_t(net.place_index(name))]) letter.insert(name);
    letters.push_back(std::move(letter));
  }
  return Word::make(std::move(letters), loop, std::move(ap));
}

// Walks every maximal interleaving extension of the prefix, closing each
// branch at a deadlock (finite word) or at the first marking revisit (lasso
// word with the revisited position as the stitch). Throws VerificationError
// when a closed branch falsifies f; returns false when the node budget ran
// out first (caller reports the counterexample as cautious).
class ExtensionCheck {
 public:
  ExtensionCheck(const Net& net, const FormulaPtr& f, std::size_t budget)
      : net_(net), f_(f), budget_(budget) {}

  bool run(const StepExecution& prefix) {
    path_ = prefix.markings;
    visit();
    return !out_of_budget_;
  }

 private:
  void check_word(std::optional<std::size_t> loop) {
    if (!eval(f_, word_of(net_, path_, loop, f_)))
      throw VerificationError(
          "a maximal extension of a cautious counterexample falsifies the formula");
  }

  void visit() {
    if (out_of_budget_ || ++used_ > budget_) {
      out_of_budget_ = true;
      return;
    }
    const Marking m = path_.back();
    if (deadlocked(net_, m)) {
      check_word({});
      return;
    }
    for (int t : enabled_set(net_, m)) {
      Marking next = fire(net_, m, t);
      std::optional<std::size_t> revisit;
      for (std::size_t j = 0; j < path_.size(); ++j)
        if (path_[j] == next) {
          revisit = j;
          break;
        }
      path_.push_back(std::move(next));
      if (revisit)
        check_word(revisit);
      else
        visit();
      path_.pop_back();
      if (out_of_budget_) return;
    }
  }

  const Net& net_;
  const FormulaPtr& f_;
  std::size_t budget_;
  std::size_t used_ = 0;
  bool out_of_budget_ = false;
  std::vector<Marking> path_;
};

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

// Answers bound 0 for reach/deadlock: is some marking satisfying the initial
// condition already a witness?
std::optional<Report> bound_zero(const CheckRequest& req, const ConditionPtr& c0,
                                 const Clock& clock) {
  auto goal = [&](const Marking& m) {
    return req.mode == Mode::deadlock ? deadlocked(req.net, m)
                                      : eval_condition(req.target, req.net, m);
  };
  SearchOutcome out =
      oracle_search(req.net, c0, goal, 0, req.semantics, req.oracle_budget);
  Report r;
  r.seconds = clock.seconds();
  if (out.status == SearchOutcome::Status::budget_exceeded) {
    r.verdict = Verdict::budget_exceeded;
    return r;
  }
  if (out.status != SearchOutcome::Status::found) return std::nullopt;
  const Marking& m0 = out.execution->markings.front();
  if (!eval_condition(c0, req.net, m0) || !goal(m0))
    throw VerificationError("oracle produced a witness that fails its own goal");
  r.verdict = Verdict::counterexample;
  r.bound_found = 0;
  r.execution = out.execution;
  if (req.mode == Mode::deadlock) r.shape = Counterexample::Shape::deadlock;
  r.verification.replay_ok = true;
  r.verification.oracle_semantics_ok = true;
  r.seconds = clock.seconds();
  return r;
}

Report drive(const CheckRequest& req) {
  validate_request(req);
  Clock clock;
  ConditionPtr c0 = initial_condition(req);
  FormulaPtr f = refutation_target(req);
  Report report;
  if (req.bound_min == 0 && req.mode != Mode::ltl) {
    std::optional<Report> zero = bound_zero(req, c0, clock);
    if (zero) return *zero;
  }
  for (std::size_t n = std::max<std::size_t>(1, req.bound_min);
       n <= req.bound_max; ++n) {
    GroundProgram prog = assemble(req, f, int(n));
    report.rules = prog.size();
    report.atoms = prog.atoms().size();
    SolveResult res = solve(prog, SolveBudget{req.solver_budget});
    report.decisions += res.stats.decisions;
    if (res.status == SolveStatus::budget_exceeded) {
      report.verdict = Verdict::budget_exceeded;
      report.seconds = clock.seconds();
      return report;
    }
    if (res.status == SolveStatus::unsat) continue;
    report.bound_found = n;
    report.verdict = Verdict::counterexample;
    report.verification.replay_ok = true;  // decode replays or throws
    if (req.mode == Mode::ltl) {
      Counterexample cex = decode_counterexample(*res.model, req.net, int(n));
      if (!eval_condition(c0, req.net, cex.execution.markings.front()))
        throw VerificationError("decoded execution starts outside the initial condition");
      switch (cex.shape) {
        case Counterexample::Shape::loop:
        case Counterexample::Shape::deadlock: {
          Word w = word_of(req.net, cex.execution.markings, cex.loop, f);
          if (!eval(f, w))
            throw VerificationError("decoded counterexample word falsifies the formula");
          report.verification.oracle_semantics_ok = true;
          break;
        }
        case Counterexample::Shape::non_maximal: {
          ExtensionCheck checker(req.net, f, req.oracle_budget);
          if (checker.run(cex.execution))
            report.verification.oracle_semantics_ok = true;
          else
            report.verification.semantics_cautious = true;
          break;
        }
      }
      report.shape = cex.shape;
      report.loop_index = cex.loop;
      report.execution = std::move(cex.execution);
    } else {
      StepExecution ex = decode_execution(*res.model, req.net, int(n));
      if (!eval_condition(c0, req.net, ex.markings.front()))
        throw VerificationError("decoded execution starts outside the initial condition");
      if (req.mode == Mode::deadlock) {
        if (!deadlocked(req.net, ex.markings.back()))
          throw VerificationError("decoded final marking is not a deadlock");
        report.shape = Counterexample::Shape::deadlock;
      } else {
        if (!eval_condition(req.target, req.net, ex.markings.back()))
          throw VerificationError("decoded final marking misses the target condition");
      }
      report.verification.oracle_semantics_ok = true;
      strip_idle_prefix(ex);
      report.execution = std::move(ex);
    }
    report.seconds = clock.seconds();
    return report;
  }
  report.verdict = Verdict::no_cex_within_bound;
  report.seconds = clock.seconds();
  return report;
}

}  // namespace

Report run_deadlock(const CheckRequest& req) {
  if (req.mode != Mode::deadlock) throw DomainError("request mode is not deadlock");
  return drive(req);
}

Report run_reach(const CheckRequest& req) {
  if (req.mode != Mode::reach) throw DomainError("request mode is not reach");
  return drive(req);
}

Report run_ltl(const CheckRequest& req) {
  if (req.mode != Mode::ltl) throw DomainError("request mode is not ltl");
  return drive(req);
}

Report run_check(const CheckRequest& req) {
  switch (req.mode) {
    case Mode::deadlock:
      return run_deadlock(req);
    case Mode::reach:
      return run_reach(req);
    case Mode::ltl:
      return run_ltl(req);
  }
  throw DomainError("unknown mode");
}

void export_program(const CheckRequest& req, const std::string& path) {
  validate_request(req);
  if (req.bound_min < 1)
    throw DomainError("bound 0 has no program to dump; the encoding starts at 1");
  GroundProgram prog = assemble(req, refutation_target(req), int(req.bound_min));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << prog.to_text();
  if (!out) throw DomainError("failed writing '" + path + "'");
}

void gen_benchmark(std::size_t k, const std::string& path) {
  write_net_file(dining_philosophers(k), path);
}

// --- rendering -----------------------------------------------------------------

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::counterexample:
      return "COUNTEREXAMPLE";
    case Verdict::no_cex_within_bound:
      return "NO_CEX_WITHIN_BOUND";
    case Verdict::budget_exceeded:
      return "BUDGET_EXCEEDED";
  }
  return "?";
}

const char* shape_name(Counterexample::Shape s) {
  switch (s) {
    case Counterexample::Shape::loop:
      return "loop";
    case Counterexample::Shape::deadlock:
      return "deadlock";
    case Counterexample::Shape::non_maximal:
      return "non_maximal";
  }
  return "?";
}

std::vector<std::string> step_names(const Net& net, const std::vector<int>& step) {
  std::vector<std::string> names;
  for (int t : step) names.push_back(net.transitions[std::size_t(t)]);
  std::sort(names.begin(), names.end());
  return names;
}

std::string join(const std::vector<std::string>& names, const char* when_empty) {
  if (names.empty()) return when_empty;
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ' ';
    out += names[i];
  }
  return out;
}

}  // namespace

std::string report_to_text(const Report& r, const Net& net) {
  std::ostringstream out;
  out << "verdict: " << verdict_name(r.verdict) << "\n";
  if (r.bound_found) out << "bound: " << *r.bound_found << "\n";
  if (r.shape) {
    out << "shape: " << shape_name(*r.shape);
    if (r.loop_index) out << " (loops back to marking " << *r.loop_index << ")";
    out << "\n";
  }
  if (r.execution) {
    out << "execution:\n";
    const StepExecution& ex = *r.execution;
    for (std::size_t i = 0; i < ex.markings.size(); ++i) {
      out << "  marking " << i << ": "
          << join(net.place_names(ex.markings[i]), "(empty)") << "\n";
      if (i < ex.steps.size())
        out << "  step " << i << ": " << join(step_names(net, ex.steps[i]), "(idle)")
            << "\n";
    }
  }
  out << "verification: replay " << (r.verification.replay_ok ? "ok" : "not run")
      << ", semantics "
      << (r.verification.oracle_semantics_ok
              ? "ok"
              : (r.verification.semantics_cautious ? "cautious" : "not run"))
      << "\n";
  out << "statistics: rules=" << r.rules << " atoms=" << r.atoms
      << " decisions=" << r.decisions << " time=" << r.seconds << "s\n";
  return out.str();
}

std::string report_to_json(const Report& r, const Net& net) {
  nlohmann::json j;
  j["schema"] = 1;
  j["verdict"] = verdict_name(r.verdict);
  j["bound"] = r.bound_found ? nlohmann::json(*r.bound_found) : nlohmann::json();
  j["shape"] = r.shape ? nlohmann::json(shape_name(*r.shape)) : nlohmann::json();
  j["loop"] = r.loop_index ? nlohmann::json(*r.loop_index) : nlohmann::json();
  if (r.execution) {
    nlohmann::json seq = nlohmann::json::array();
    const StepExecution& ex = *r.execution;
    for (std::size_t i = 0; i < ex.markings.size(); ++i) {
      seq.push_back(net.place_names(ex.markings[i]));
      if (i < ex.steps.size()) seq.push_back(step_names(net, ex.steps[i]));
    }
    j["execution"] = std::move(seq);
  } else {
    j["execution"] = nullptr;
  }
  j["verification"] = {{"replay_ok", r.verification.replay_ok},
                       {"oracle_semantics_ok", r.verification.oracle_semantics_ok},
                       {"semantics_cautious", r.verification.semantics_cautious}};
  j["statistics"] = {{"rules", r.rules},
                     {"atoms", r.atoms},
                     {"decisions", r.decisions},
                     {"seconds", r.seconds}};
  return j.dump(2) + "\n";
}

}  // namespace stepbmc
