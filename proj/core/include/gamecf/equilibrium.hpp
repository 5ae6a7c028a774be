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

#ifndef GAMECF_EQUILIBRIUM_HPP_
#define GAMECF_EQUILIBRIUM_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gamecf/game.hpp"
#include "gamecf/simplex.hpp"

namespace gamecf {

// Payoff comparisons (best responses, dominance) use this slack.
inline constexpr double kPayoffTolerance = 1e-12;

// Pure-strategy Nash equilibria at state w of a complete-information game,
// as profile indices in ascending (lexicographic) order.
std::vector<int> enumerate_pure_ne(const FiniteGame& game, int w);

// Variable layout shared by decision rules and the BCE polytope: one block
// per (state w, kernel draw k), each block holding |Y| probabilities. Draw k
// of state w is game.information().rows[w][k].
class RuleLayout {
 public:
  RuleLayout() = default;
  explicit RuleLayout(const FiniteGame& game);

  int size() const { return size_; }
  int num_profiles() const { return num_profiles_; }
  int num_states() const { return static_cast<int>(offsets_.size()); }
  int num_draws(int w) const { return draws_[w]; }
  int index(int w, int k, int y) const {
    return offsets_[w] + k * num_profiles_ + y;
  }

 private:
  std::vector<int> offsets_;
  std::vector<int> draws_;
  int num_profiles_ = 0;
  int size_ = 0;
};

// sigma(y | w, t) for every state and kernel draw.
struct DecisionRule {
  RuleLayout layout;
  std::vector<double> prob;

  double operator()(int w, int k, int y) const {
    return prob[layout.index(w, k, y)];
  }
};

// Deterministic rule recommending `profile_of_state[w]` at every draw.
DecisionRule deterministic_rule(const FiniteGame& game,
                                const std::vector<int>& profile_of_state);

// rho_sigma(y | w) = sum_t sigma(y | w, t) mu(t | w).
std::vector<double> rule_outcome(const FiniteGame& game, const DecisionRule& rule,
                                 int w);

struct BcePolytope {
  FiniteGame game;
  RuleLayout layout;
  // Normalization rows first (one per (w, k)), then obedience rows ordered by
  // (player, own signal, recommended action, deviation).
  LinearProgram lp;
  int num_normalization_rows = 0;
  int num_obedience_rows = 0;
};

// Obedience rows are expressed conditionally on the player's own signal:
// each row is divided by P(t_i) when that is positive, which leaves the
// feasible set unchanged and keeps coefficients on the payoff scale.
BcePolytope build_bce_polytope(const FiniteGame& game);

bool rule_feasible(const BcePolytope& poly, const DecisionRule& rule,
                   double tolerance = kLpFeasibilityTolerance);

struct FeasiblePoint {
  bool feasible = false;
  DecisionRule rule;
};
FeasiblePoint lp_feasible_point(const BcePolytope& poly);

// max over the polytope of direction'sigma. Throws NumericalFailure when the
// program is infeasible or unbounded.
double bce_support_function(const BcePolytope& poly,
                            const std::vector<double>& direction);
// Maximizer as well as value.
std::pair<double, DecisionRule> bce_maximize(const BcePolytope& poly,
                                             const std::vector<double>& direction);

// Lifts an outcome-space direction d(w, y) (indexed w * |Y| + y) into
// decision-rule coordinates, weighted by mu_W(w) mu(t | w) when
// `weight_by_state` is true and by mu(t | w) only otherwise.
std::vector<double> lift_outcome_direction(const BcePolytope& poly,
                                           const std::vector<double>& direction,
                                           bool weight_by_state);

// Support function of {rho_sigma(. | w) : sigma in BCE} in each direction over
// profiles. Complete-information games are solved on the one-state slice.
std::vector<double> bce_outcome_set(const FiniteGame& game, int w,
                                    const std::vector<std::vector<double>>& directions);

// Support function of the joint outcome law {mu_W(w) rho_sigma(y | w)} over
// the whole grid; directions are indexed w * |Y| + y.
std::vector<double> bce_joint_outcome_set(
    const BcePolytope& poly, const std::vector<std::vector<double>>& directions);

struct EquilibriumRestriction {
  enum class Kind { kNone, kProductForm, kSymmetric, kCustom };
  Kind kind = Kind::kNone;
  double tolerance = 1e-9;
  std::function<bool(const DecisionRule&)> custom;
};

// Accepts a rule iff it is polytope-feasible and satisfies the restriction.
// Product form: every (w, t) slice equals the product of per-player
// marginals, and player i's marginal depends on t only through t_i.
// Symmetric: every (w, t) slice is invariant to permuting players' actions
// (requires a common action count).
std::function<bool(const DecisionRule&)> restrict_rules(
    const BcePolytope& poly, const EquilibriumRestriction& restriction);

// Largest deviation of any slice from the product of its marginals.
double factorization_residual(const FiniteGame& game, const DecisionRule& rule);

// Adds signals S_i drawn from extra[i][t_i][s_i] given the player's own
// signal only. The result carries an explicit kernel over (t_i, s_i) pairs,
// indexed t_i * |S_i| + s_i.
FiniteGame augment_signals(const FiniteGame& game,
                           const std::vector<std::vector<std::vector<double>>>& extra);

// Plain-text constraint listing (one row per line) for external solvers.
std::string polytope_to_text(const BcePolytope& poly);

// ---------------------------------------------------------------------------
// Symmetric threshold BNE of the two-firm entry game with standard normal
// private payoff shocks W_i ~ N(mean, 1): enter iff W_i > w_bar, where
// w_bar + delta (1 - Phi(w_bar - mean)) = 0.

struct ThresholdBne {
  double delta = 0.0;
  double mean = 0.0;
  double w_bar = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

double threshold_equation(double w, double delta, double mean = 0.0);
ThresholdBne solve_threshold_bne(double delta, double mean = 0.0);

// Upper end of the admissible deviation interval (0, bound) for a shift
// alpha of the state.
double deviation_epsilon_bound(double delta, double alpha);

// Expected gain from entering only when W_i + alpha > w_bar + epsilon instead
// of W_i + alpha > w_bar, while the rival keeps the pre-policy threshold.
double deviation_gain(double delta, double alpha, double epsilon);

}  // namespace gamecf

#endif  // GAMECF_EQUILIBRIUM_HPP_
