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

#ifndef GAMECF_COUNTERFACTUAL_HPP_
#define GAMECF_COUNTERFACTUAL_HPP_

#include <string>
#include <utility>

#include "gamecf/functional.hpp"
#include "gamecf/game.hpp"
#include "gamecf/selection.hpp"

namespace gamecf {

struct PredictionBound {
  std::string target;
  std::string conditioning;
  double dp = 0.0;
  double eb = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool admissible = true;        // policy passed check_policy_admissible
  bool invariance_checked = false;
};

// Equilibrium-based prediction: sum over post-policy support points u in C
// of (mu_W o f^-1)(u) E_{rho_f(G)}[h(Y, u)].
double ep(const FiniteGame& game, const Policy& policy, const SelectionRule& post_rule,
          EqSolver solver, const OutcomeFunctional& h,
          const ConditioningSet& C = ConditioningSet::all());

// Decomposition-based prediction from the pre-policy reduced form:
// sum_w mu_W(w) E_{rho_G}[h(Y, f(w)) | f(w)] 1{f(w) in S_W and C}.
double dp(const ReducedForm& pre, const FiniteGame& game, const Policy& policy,
          const OutcomeFunctional& h, const ConditioningSet& C = ConditioningSet::all());

// P{f(W) in C, f(W) outside the pre-policy support}.
double error_bound(const FiniteGame& game, const Policy& policy,
                   const ConditioningSet& C = ConditioningSet::all());

// lower = dp + E[h_lower(f(W)) 1{off}], upper = dp + E[h_upper(f(W)) 1{off}].
// Refuses (Error "policy_not_admissible") when the policy alters a coordinate
// that is unobserved or not revealed to every player.
PredictionBound bounds(const ReducedForm& pre, const FiniteGame& game, const Policy& policy,
                       const OutcomeFunctional& h,
                       const ConditioningSet& C = ConditioningSet::all(),
                       bool invariance_checked = false);

struct EffectBounds {
  double adp = 0.0;
  double mean = 0.0;  // pre-policy E[Y_i]
  double eb = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Delta_i in [ADP_i - E[Y_i] + h_L EB, ADP_i - E[Y_i] + h_U EB] with h_L, h_U
// the extreme action levels of player i.
EffectBounds average_effect(const ReducedForm& pre, const FiniteGame& game,
                            const Policy& policy, int player);

enum class BoundSide { kLower, kUpper };

struct SharpnessConstruction {
  FiniteGame game;
  SelectionRule rule;
  EqSolver solver = EqSolver::kPureNe;
  // E[(declared bound - attained h) on off-support images]; at most eps.
  double slack = 0.0;
};

// Complete-information game on the grid of `game` in which every player has
// a strictly dominant action: the coordinate of a maximizer of h(., w)
// where w lies in the post-policy support (upper side) or in the
// intersection of both supports (lower side), and of a minimizer elsewhere.
// Its equilibrium-based prediction attains the chosen bound up to `slack`.
SharpnessConstruction sharpness_game(const FiniteGame& game, const Policy& policy,
                                     const OutcomeFunctional& h, BoundSide side, double eps,
                                     const ConditioningSet& C = ConditioningSet::all());

}  // namespace gamecf

#endif  // GAMECF_COUNTERFACTUAL_HPP_
