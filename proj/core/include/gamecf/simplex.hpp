/*
 * Copyright 2026 The gamecf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GAMECF_SIMPLEX_HPP_
#define GAMECF_SIMPLEX_HPP_

#include <string>
#include <utility>
#include <vector>

namespace gamecf {

// Primal feasibility tolerance of the simplex solver.
inline constexpr double kLpFeasibilityTolerance = 1e-9;

enum class Sense { kLe, kGe, kEq };

struct LinearRow {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

// Variables are implicitly non-negative.
struct LinearProgram {
  int num_vars = 0;
  std::vector<LinearRow> rows;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  // Zero means a size-dependent default.
  int max_iterations = 0;
  double pivot_tolerance = 1e-11;
};

// Dense two-phase tableau simplex with Bland's rule. Maximizes
// objective'x over the program; the objective may be empty for a pure
// feasibility solve. Throws NumericalFailure when the iteration cap is hit.
LpResult solve_lp(const LinearProgram& lp, const std::vector<double>& objective,
                  const SimplexOptions& options = {});

// Largest violation of any row at x (0 when feasible), including
// non-negativity.
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace gamecf

#endif  // GAMECF_SIMPLEX_HPP_
