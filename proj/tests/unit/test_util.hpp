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


#ifndef GAMECF_TESTS_UNIT_TEST_UTIL_HPP_
#define GAMECF_TESTS_UNIT_TEST_UTIL_HPP_

#include <vector>

#include "gamecf/game.hpp"

namespace gamecf::testing {

// Two-firm entry game with one market covariate x_0_1 on {0, 1} (weights
// 0.6 / 0.4) and a degenerate shock grid at `eps`.
inline FiniteGame small_entry_game(double delta = -1.0, double eps = 0.5, double beta = 0.0) {
  EntryGameParams p;
  p.players = 2;
  p.delta = delta;
  p.beta = {{beta}, {beta}};
  p.x_columns = {Coordinate{"x_0_1"}};
  p.x_grid = {{{0.0}, 0.6}, {{1.0}, 0.4}};
  p.eps_grid = {{{eps, eps}, 1.0}};
  return build_entry_game(p);
}

inline std::vector<double> column(const std::vector<std::vector<double>>& rows, int c) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

}  // namespace gamecf::testing

#endif  // GAMECF_TESTS_UNIT_TEST_UTIL_HPP_
