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


#ifndef GAMECF_INSTANCES_HPP_
#define GAMECF_INSTANCES_HPP_

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>

#include "gamecf/counterfactual.hpp"
#include "gamecf/functional.hpp"
#include "gamecf/game.hpp"
#include "gamecf/selection.hpp"

namespace gamecf {

// A complete counterfactual question: game, policy, selection, solver,
// functional and conditioning set. Instances are pure functions of
// (seed, index), which is what `describe` records for replay.
struct Instance {
  std::string family;
  std::uint64_t seed = 0;
  int index = 0;
  FiniteGame game;
  Policy policy;
  SelectionRule rule;
  EqSolver solver = EqSolver::kPureNe;
  OutcomeFunctional h;
  ConditioningSet C;

  nlohmann::json describe() const;
};

// Complete-information entry game with 2 or 3 players, an x grid and an eps
// grid of at most 5 points each, interaction delta of either sign (so pure
// equilibria exist), a hashed state-invariant selection rule, a random
// admissible policy on the observed covariates (which may leave the support)
// and a bounded functional.
Instance random_instance(std::uint64_t seed, int index);

// Same family with a binary covariate `d` whose both values carry mass and the
// policy d -> 0, so the policy never leaves the support.
Instance dummy_to_zero_instance(std::uint64_t seed, int index);

// Selection keyed on the pre/post label rather than on the state: the first
// listed equilibrium before the policy and the last one after it, on a game
// where every state has two equilibria. h = expected entry of player 1.
Instance label_dependent_instance();

// Entry game with delta = 0: every player has a strictly dominant action.
FiniteGame random_dominant_game(std::uint64_t seed, int index);

// Two-player public/private entry game for BCE checks.
FiniteGame random_public_private_game(std::uint64_t seed, int index);

// Catalogued estimation design: two firms, market dummy `d` and firm
// covariates x_1, x_2 on an 8-point grid, uniform eps grid, uniform
// state-invariant selection. The policy of interest is d -> 0.
FiniteGame estimation_game();

// Confounded design: the shocks and d both depend on an observed control z,
// so E[Y | d] mixes the effect of d with that of z.
FiniteGame confounded_game();

}  // namespace gamecf

#endif  // GAMECF_INSTANCES_HPP_
