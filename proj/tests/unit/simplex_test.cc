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


#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "gamecf/simplex.hpp"

namespace gamecf {
namespace {

LinearRow row(std::vector<std::pair<int, double>> terms, Sense sense, double rhs) {
  return {std::move(terms), sense, rhs};
}

TEST(Simplex, TextbookMaximum) {
  LinearProgram lp{2, {row({{0, 1}, {1, 1}}, Sense::kLe, 4), row({{0, 1}, {1, 3}}, Sense::kLe, 6),
                       row({{0, 1}}, Sense::kLe, 3)}};
  const auto r = solve_lp(lp, {3, 2});
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 11.0, 1e-12);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.x[1], 1.0, 1e-12);
  EXPECT_LE(max_violation(lp, r.x), 1e-12);
}

TEST(Simplex, EqualityAndGreaterEqualRows) {
  LinearProgram lp{2, {row({{0, 1}, {1, 1}}, Sense::kEq, 1), row({{1, 1}}, Sense::kGe, 0.25)}};
  const auto r = solve_lp(lp, {1, -1});
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 0.5, 1e-12);
}

TEST(Simplex, DetectsInfeasibility) {
  LinearProgram lp{1, {row({{0, 1}}, Sense::kLe, 1), row({{0, 1}}, Sense::kGe, 2)}};
  EXPECT_EQ(solve_lp(lp, {1}).status, LpStatus::kInfeasible);
}

TEST(Simplex, DetectsUnboundedness) {
  LinearProgram lp{2, {row({{0, 1}, {1, -1}}, Sense::kLe, 1)}};
  EXPECT_EQ(solve_lp(lp, {1, 0}).status, LpStatus::kUnbounded);
}

TEST(Simplex, FeasibilityOnlyWithEmptyObjective) {
  LinearProgram lp{2, {row({{0, 1}, {1, 1}}, Sense::kEq, 1)}};
  const auto r = solve_lp(lp, {});
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_LE(max_violation(lp, r.x), 1e-12);
}

// Beale's degenerate program cycles under the textbook pivot rule.
TEST(Simplex, BealeCyclingExampleTerminates) {
  LinearProgram lp{4,
                   {row({{0, 0.25}, {1, -60}, {2, -0.04}, {3, 9}}, Sense::kLe, 0),
                    row({{0, 0.5}, {1, -90}, {2, -0.02}, {3, 3}}, Sense::kLe, 0),
                    row({{2, 1}}, Sense::kLe, 1)}};
  const auto r = solve_lp(lp, {0.75, -150, 0.02, -6});
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 0.05, 1e-12);
}

// Oracle: the best feasible vertex among all pairwise intersections of the
// constraint lines and the axes.
double vertex_oracle(const std::vector<std::array<double, 3>>& cons, double c0, double c1) {
  std::vector<std::array<double, 3>> lines = cons;
  lines.push_back({1, 0, 0});
  lines.push_back({0, 1, 0});
  double best = -HUGE_VAL;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& a = lines[i];
      const auto& b = lines[j];
      const double det = a[0] * b[1] - a[1] * b[0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (a[2] * b[1] - a[1] * b[2]) / det;
      const double y = (a[0] * b[2] - a[2] * b[0]) / det;
      bool ok = x >= -1e-9 && y >= -1e-9;
      for (const auto& c : cons) ok = ok && c[0] * x + c[1] * y <= c[2] + 1e-9;
      if (ok) best = std::max(best, c0 * x + c1 * y);
    }
  }
  return best;
}

TEST(Simplex, MatchesVertexEnumerationOnRandomBoundedPrograms) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> coef(-1.0, 2.0);
  std::uniform_real_distribution<double> rhs(0.5, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::array<double, 3>> cons{{1, 0, rhs(gen)}, {0, 1, rhs(gen)}};
    const int extra = 1 + static_cast<int>(gen() % 4);
    for (int k = 0; k < extra; ++k) cons.push_back({coef(gen), coef(gen), rhs(gen)});
    LinearProgram lp{2, {}};
    for (const auto& c : cons) lp.rows.push_back(row({{0, c[0]}, {1, c[1]}}, Sense::kLe, c[2]));
    const double c0 = coef(gen);
    const double c1 = coef(gen);
    const auto r = solve_lp(lp, {c0, c1});
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, vertex_oracle(cons, c0, c1), 1e-9) << "trial " << trial;
  }
}

}  // namespace
}  // namespace gamecf
