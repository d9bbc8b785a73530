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
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>

#include "stepbmc/check.hpp"
#include "stepbmc/common.hpp"

namespace py = pybind11;

namespace {

stepbmc::CheckRequest build_request(const std::string& net_text,
                                    const std::string& mode,
                                    const std::string& spec,
                                    const std::string& semantics,
                                    std::pair<std::size_t, std::size_t> bounds,
                                    const std::string& init,
                                    std::uint64_t solver_budget,
                                    std::size_t oracle_budget, bool staged_atoms) {
  stepbmc::CheckRequest req;
  req.net = stepbmc::parse_net(net_text);
  if (mode == "deadlock") {
    req.mode = stepbmc::Mode::deadlock;
  } else if (mode == "reach") {
    req.mode = stepbmc::Mode::reach;
    req.target = stepbmc::parse_condition(spec);
  } else if (mode == "ltl") {
    req.mode = stepbmc::Mode::ltl;
    req.formula = stepbmc::parse_formula(spec);
  } else {
    throw stepbmc::DomainError("mode must be deadlock, reach or ltl");
  }
  if (!init.empty()) req.initial = stepbmc::parse_condition(init);
  req.semantics = semantics == "interleaving" ? stepbmc::Semantics::interleaving
                                              : stepbmc::Semantics::step;
  req.bound_min = bounds.first;
  req.bound_max = bounds.second;
  req.solver_budget = solver_budget;
  req.oracle_budget = oracle_budget;
  req.staged_atoms = staged_atoms;
  return req;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "bounded model checking for 1-safe place/transition nets";

  m.def(
      "check",
      [](const std::string& net_text, const std::string& mode,
         const std::string& spec, const std::string& semantics,
         std::pair<std::size_t, std::size_t> bounds, const std::string& init,
         std::uint64_t solver_budget, std::size_t oracle_budget,
         bool staged_atoms) {
        stepbmc::CheckRequest req =
            build_request(net_text, mode, spec, semantics, bounds, init,
                          solver_budget, oracle_budget, staged_atoms);
        stepbmc::Report report = stepbmc::run_check(req);
        return stepbmc::report_to_json(report, req.net);
      },
      py::arg("net_text"), py::arg("mode"), py::arg("spec") = "",
      py::arg("semantics") = "step",
      py::arg("bounds") = std::pair<std::size_t, std::size_t>{1, 1},
      py::arg("init") = "", py::arg("solver_budget") = std::uint64_t(0),
      py::arg("oracle_budget") = std::size_t(1) << 22,
      py::arg("staged_atoms") = false,
      "Run a bounded check and return the JSON report as a string.");

  m.def(
      "generate_dp",
      [](std::size_t k) { return stepbmc::net_to_text(stepbmc::dining_philosophers(k)); },
      py::arg("k"), "Dining-philosophers benchmark net in the net file format.");

  py::register_exception<stepbmc::ParseError>(m, "NetParseError");
  py::register_exception<stepbmc::DomainError>(m, "BmcDomainError");
  py::register_exception<stepbmc::VerificationError>(m, "BmcVerificationError");
}
