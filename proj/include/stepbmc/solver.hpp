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
// Stable-model search: chronological backtracking over atom assignments.
// Shorthand rules are handled natively during search; every candidate model
// is certified through the independent expand/reduct/least-model path before
// it is returned.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stepbmc/asp.hpp"

namespace stepbmc {

struct SolveBudget {
  std::uint64_t max_decisions = 0;  // 0 = unlimited
};

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t models = 0;
};

enum class SolveStatus { sat, unsat, budget_exceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::unsat;
  std::optional<StableModel> model;
  SolveStats stats;
};

enum class EnumerateStatus { complete, limit_reached, budget_exceeded };

struct EnumerateResult {
  EnumerateStatus status = EnumerateStatus::complete;
  std::vector<StableModel> models;  // in deterministic search order
  SolveStats stats;
};

// First stable model in the deterministic search order, if any.
SolveResult solve(const GroundProgram& p, const SolveBudget& budget = {});

// Up to `limit` stable models (0 = all).
EnumerateResult enumerate(const GroundProgram& p, std::size_t limit = 0,
                          const SolveBudget& budget = {});

}  // namespace stepbmc
