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

#include "gamecf/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gamecf/error.hpp"

namespace gamecf {
namespace {

// Row-major tableau. Column `cols - 1` holds the right-hand side; the last
// row holds reduced costs of the current minimization objective.
class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  double& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * cols_ + c];
  }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    double* prow = &a_[static_cast<std::size_t>(pr) * cols_];
    for (int c = 0; c < cols_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &a_[static_cast<std::size_t>(r) * cols_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c < cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> a_;
};

struct Solver {
  Tableau t;
  std::vector<int> basis;
  int m;
  int width;  // structural + slack + artificial columns
  double pivot_tol;
  int max_iter;
  int iterations = 0;

  // Minimizes the objective stored in the last tableau row over columns
  // [0, allowed). Returns false on unboundedness.
  bool run(int allowed) {
    const int obj = m;
    const int rhs = width;
    while (true) {
      int enter = -1;
      for (int c = 0; c < allowed; ++c) {
        if (t.at(obj, c) < -pivot_tol) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        const double a = t.at(r, enter);
        if (a <= pivot_tol) continue;
        const double ratio = t.at(r, rhs) / a;
        if (ratio < best - 1e-14 ||
            (ratio <= best + 1e-14 && leave >= 0 && basis[r] < basis[leave])) {
          if (ratio < best) best = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      if (++iterations > max_iter) {
        throw NumericalFailure("simplex iteration limit reached");
      }
      t.pivot(leave, enter);
      basis[leave] = enter;
    }
  }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const std::vector<double>& objective,
                  const SimplexOptions& options) {
  const int n = lp.num_vars;
  if (!objective.empty() && static_cast<int>(objective.size()) != n) {
    throw InvalidArgument("objective length does not match variable count");
  }
  const int m = static_cast<int>(lp.rows.size());

  // Normalize rows to non-negative right-hand sides.
  std::vector<double> sign(m, 1.0);
  std::vector<Sense> sense(m);
  int slacks = 0;
  int artificials = 0;
  for (int r = 0; r < m; ++r) {
    sense[r] = lp.rows[r].sense;
    if (lp.rows[r].rhs < 0.0) {
      sign[r] = -1.0;
      if (sense[r] == Sense::kLe) {
        sense[r] = Sense::kGe;
      } else if (sense[r] == Sense::kGe) {
        sense[r] = Sense::kLe;
      }
    }
    if (sense[r] != Sense::kEq) ++slacks;
    if (sense[r] != Sense::kLe) ++artificials;
  }
  const int width = n + slacks + artificials;
  Solver s{Tableau(m + 1, width + 1), std::vector<int>(m), m, width,
           options.pivot_tolerance,
           options.max_iterations > 0 ? options.max_iterations
                                      : 50000 + 50 * (m + width)};
  int next_slack = n;
  int next_art = n + slacks;
  for (int r = 0; r < m; ++r) {
    for (const auto& [j, v] : lp.rows[r].terms) {
      if (j < 0 || j >= n) throw InvalidArgument("row references unknown variable");
      s.t.at(r, j) += sign[r] * v;
    }
    s.t.at(r, width) = sign[r] * lp.rows[r].rhs;
    if (sense[r] == Sense::kLe) {
      s.t.at(r, next_slack) = 1.0;
      s.basis[r] = next_slack++;
    } else {
      if (sense[r] == Sense::kGe) s.t.at(r, next_slack++) = -1.0;
      s.t.at(r, next_art) = 1.0;
      s.basis[r] = next_art++;
    }
  }

  // Phase 1: minimize the sum of artificials.
  const int art_begin = n + slacks;
  for (int r = 0; r < m; ++r) {
    if (s.basis[r] < art_begin) continue;
    for (int c = 0; c <= width; ++c) s.t.at(m, c) -= s.t.at(r, c);
  }
  for (int c = art_begin; c < width; ++c) s.t.at(m, c) = 0.0;
  s.run(width);
  LpResult result;
  if (-s.t.at(m, width) > kLpFeasibilityTolerance) {
    result.status = LpStatus::kInfeasible;
    result.iterations = s.iterations;
    return result;
  }
  // Drive remaining artificials out of the basis.
  for (int r = 0; r < m; ++r) {
    if (s.basis[r] < art_begin) continue;
    int col = -1;
    double best = s.pivot_tol;
    for (int c = 0; c < art_begin; ++c) {
      if (std::abs(s.t.at(r, c)) > best) {
        best = std::abs(s.t.at(r, c));
        col = c;
      }
    }
    if (col >= 0) {
      s.t.pivot(r, col);
      s.basis[r] = col;
    }
    // Otherwise the row is redundant; its artificial stays basic at zero and
    // can never re-enter because phase 2 excludes artificial columns.
  }

  // Phase 2: minimize -objective.
  for (int c = 0; c <= width; ++c) s.t.at(m, c) = 0.0;
  if (!objective.empty()) {
    for (int j = 0; j < n; ++j) s.t.at(m, j) = -objective[j];
    for (int r = 0; r < m; ++r) {
      const int b = s.basis[r];
      const double cb = s.t.at(m, b);
      if (cb == 0.0) continue;
      for (int c = 0; c <= width; ++c) s.t.at(m, c) -= cb * s.t.at(r, c);
    }
    if (!s.run(art_begin)) {
      result.status = LpStatus::kUnbounded;
      result.iterations = s.iterations;
      return result;
    }
  }
  result.status = LpStatus::kOptimal;
  result.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (s.basis[r] < n) result.x[s.basis[r]] = std::max(0.0, s.t.at(r, width));
  }
  result.objective = 0.0;
  if (!objective.empty()) {
    for (int j = 0; j < n; ++j) result.objective += objective[j] * result.x[j];
  }
  result.iterations = s.iterations;
  return result;
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (const auto& [j, v] : row.terms) lhs += v * x[j];
    switch (row.sense) {
      case Sense::kLe:
        worst = std::max(worst, lhs - row.rhs);
        break;
      case Sense::kGe:
        worst = std::max(worst, row.rhs - lhs);
        break;
      case Sense::kEq:
        worst = std::max(worst, std::abs(lhs - row.rhs));
        break;
    }
  }
  return worst;
}

}  // namespace gamecf
