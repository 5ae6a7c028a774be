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

#ifndef GAMECF_FUNCTIONAL_HPP_
#define GAMECF_FUNCTIONAL_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gamecf/game.hpp"

namespace gamecf {

// Read access to the observed coordinates of a state by name. Asking for an
// unobserved coordinate throws, which keeps conditioning sets on the
// econometrician's side of the state.
class ObservedView {
 public:
  ObservedView(const StateLayout& layout, std::span<const double> state)
      : layout_(layout), state_(state) {}
  double operator[](std::string_view name) const;

 private:
  const StateLayout& layout_;
  std::span<const double> state_;
};

// Conditioning set C, a predicate over post-policy observed states.
struct ConditioningSet {
  std::string description = "all";
  std::function<bool(const ObservedView&)> contains;

  static ConditioningSet all();
  static ConditioningSet none();
  // lo <= coordinate <= hi.
  static ConditioningSet range(std::string coordinate, double lo, double hi);
  bool operator()(const StateLayout& layout, std::span<const double> state) const;
};

// h(y, w) with bounds h_L <= h <= h_U. `actions` holds the action level of
// every player; `state` the full state values. Optional per-state bound maps
// refine the constants.
struct OutcomeFunctional {
  std::string label;
  std::function<double(std::span<const double> actions, std::span<const double> state)> h;
  double h_lower = 0.0;
  double h_upper = 1.0;
  std::function<double(std::span<const double> state)> lower_map;
  std::function<double(std::span<const double> state)> upper_map;

  double operator()(std::span<const double> actions, std::span<const double> state) const {
    return h(actions, state);
  }
  double lower_at(std::span<const double> state) const {
    return lower_map ? lower_map(state) : h_lower;
  }
  double upper_at(std::span<const double> state) const {
    return upper_map ? upper_map(state) : h_upper;
  }
};

// Throws InvalidArgument unless lower <= h <= upper (within 1e-12) on every
// (profile, state) cell of the game.
void validate(const OutcomeFunctional& h, const FiniteGame& game);

// h = action level of player i; bounds are the extreme levels.
OutcomeFunctional make_expected_action(const FiniteGame& game, int player);
// h = 1{y_i <= t_i for every player}.
OutcomeFunctional make_cdf(std::vector<double> t);
// h = 1{max_{i in players} y_i <= t}.
OutcomeFunctional make_max_cdf(double t, std::vector<int> players, int num_players);
// h = -(y_i - target)^2.
OutcomeFunctional make_quadratic_loss(const FiniteGame& game, int player, double target);
// Auction revenue: second-highest qualifying bid, the reserve when a single
// bid qualifies, 0 otherwise. A bid qualifies when positive and at least the
// reserve (state coordinate `reserve`).
OutcomeFunctional make_revenue(const FiniteGame& game);

}  // namespace gamecf

#endif  // GAMECF_FUNCTIONAL_HPP_
