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
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "stepbmc/check.hpp"
#include "stepbmc/common.hpp"

namespace {

// Exit codes: 0 counterexample found and verified, 1 none within bounds,
// 2 usage or parse error, 3 budget exceeded, 4 internal verification failure.
constexpr int kExitCounterexample = 0;
constexpr int kExitNoCex = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw stepbmc::DomainError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void parse_bounds(const std::string& text, std::size_t& lo, std::size_t& hi) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw stepbmc::DomainError("bad bound '" + s + "' in '" + text + "'");
    return std::size_t(std::stoull(s));
  };
  std::size_t dots = text.find("..");
  if (dots == std::string::npos) {
    lo = hi = number(text);
    return;
  }
  lo = number(text.substr(0, dots));
  hi = number(text.substr(dots + 2));
  if (lo > hi) throw stepbmc::DomainError("empty bound range '" + text + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"stepbmc: bounded model checker for 1-safe place/transition nets"};
  app.require_subcommand(1);

  std::string net_path, mode_name, formula_text, target_text, init_text;
  std::string semantics_name = "step", bounds_text, dump_path;
  bool json = false, staged = false;
  std::uint64_t solver_budget = 0;
  std::size_t oracle_budget = std::size_t(1) << 22;

  CLI::App* check = app.add_subcommand("check", "search for a counterexample");
  check->add_option("--net", net_path, "net file")->required();
  check->add_option("--mode", mode_name, "deadlock, reach or ltl")
      ->required()
      ->check(CLI::IsMember({"deadlock", "reach", "ltl"}));
  check->add_option("--formula", formula_text, "temporal specification (ltl mode)");
  check->add_option("--target", target_text, "goal condition (reach mode)");
  check->add_option("--init", init_text,
                    "initial condition (default: exactly the declared marking)");
  check->add_option("--semantics", semantics_name, "step or interleaving")
      ->check(CLI::IsMember({"step", "interleaving"}));
  check->add_option("--bounds", bounds_text, "bound range A..B (or a single bound)")
      ->required();
  check->add_option("--dump", dump_path,
                    "write the ground program for the smallest bound and exit");
  check->add_flag("--json", json, "report as JSON instead of text");
  check->add_option("--solver-budget", solver_budget,
                    "max solver decisions per bound (0 = unlimited)");
  check->add_option("--oracle-budget", oracle_budget,
                    "max oracle nodes for verification searches");
  check->add_flag("--staged-atoms", staged,
                  "restrict the encoding to forward-reachable atoms");

  std::string gen_kind, gen_out;
  std::size_t gen_k = 0;
  CLI::App* gen = app.add_subcommand("gen", "generate a benchmark net");
  gen->add_option("kind", gen_kind, "benchmark family (dp)")
      ->required()
      ->check(CLI::IsMember({"dp"}));
  gen->add_option("k", gen_k, "instance size")->required();
  gen->add_option("-o,--out", gen_out, "output net file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) {
    stepbmc::gen_benchmark(gen_k, gen_out);
    return 0;
  }

  stepbmc::CheckRequest req;
  req.net = stepbmc::parse_net(slurp(net_path));
  if (mode_name == "deadlock") {
    req.mode = stepbmc::Mode::deadlock;
    if (!formula_text.empty() || !target_text.empty())
      throw stepbmc::DomainError("deadlock mode takes no --formula or --target");
  } else if (mode_name == "reach") {
    req.mode = stepbmc::Mode::reach;
    if (target_text.empty()) throw stepbmc::DomainError("reach mode needs --target");
    if (!formula_text.empty())
      throw stepbmc::DomainError("reach mode takes no --formula");
    req.target = stepbmc::parse_condition(target_text);
  } else {
    req.mode = stepbmc::Mode::ltl;
    if (formula_text.empty()) throw stepbmc::DomainError("ltl mode needs --formula");
    if (!target_text.empty()) throw stepbmc::DomainError("ltl mode takes no --target");
    req.formula = stepbmc::parse_formula(formula_text);
  }
  if (!init_text.empty()) req.initial = stepbmc::parse_condition(init_text);
  req.semantics = semantics_name == "interleaving"
                      ? stepbmc::Semantics::interleaving
                      : stepbmc::Semantics::step;
  parse_bounds(bounds_text, req.bound_min, req.bound_max);
  req.solver_budget = solver_budget;
  req.oracle_budget = oracle_budget;
  req.staged_atoms = staged;

  if (!dump_path.empty()) {
    stepbmc::export_program(req, dump_path);
    return 0;
  }

  stepbmc::Report report = stepbmc::run_check(req);
  std::cout << (json ? stepbmc::report_to_json(report, req.net)
                     : stepbmc::report_to_text(report, req.net));
  switch (report.verdict) {
    case stepbmc::Verdict::counterexample:
      return kExitCounterexample;
    case stepbmc::Verdict::no_cex_within_bound:
      return kExitNoCex;
    case stepbmc::Verdict::budget_exceeded:
      return kExitBudget;
  }
  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const stepbmc::VerificationError& e) {
    std::cerr << "internal verification failure: " << e.what() << "\n";
    return kExitInternal;
  } catch (const stepbmc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const stepbmc::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
