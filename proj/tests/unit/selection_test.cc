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

#include <numeric>
#include <vector>

#include "gamecf/counterfactual.hpp"
#include "gamecf/instances.hpp"
#include "gamecf/selection.hpp"
#include "test_util.hpp"

namespace gamecf {
namespace {

int profile(const FiniteGame& g, int a, int b) {
  return g.profiles().encode(std::vector<int>{a, b});
}

TEST(Selection, FirstListedAndPlayerFavored) {
  const auto g = testing::small_entry_game(-1.0, 0.5);
  const auto first = reduced_form(g, SelectionRule::first_listed(), EqSolver::kPureNe);
  EXPECT_DOUBLE_EQ(first(0, profile(g, 0, 1)), 1.0);
  const auto fav = reduced_form(g, SelectionRule::player_favored(0), EqSolver::kPureNe);
  EXPECT_DOUBLE_EQ(fav(0, profile(g, 1, 0)), 1.0);
  const auto fav2 = reduced_form(g, SelectionRule::player_favored(1), EqSolver::kPureNe);
  EXPECT_DOUBLE_EQ(fav2(1, profile(g, 0, 1)), 1.0);
}

TEST(Selection, InvariantUniformSplitsEvenly) {
  const auto g = testing::small_entry_game(-1.0, 0.5);
  const auto rho = reduced_form(g, SelectionRule::invariant_by_state(), EqSolver::kPureNe);
  EXPECT_DOUBLE_EQ(rho(0, profile(g, 0, 1)), 0.5);
  EXPECT_DOUBLE_EQ(rho(0, profile(g, 1, 0)), 0.5);
  EXPECT_DOUBLE_EQ(rho(0, profile(g, 1, 1)), 0.0);
}

TEST(Selection, HashedWeightsAreDeterministicDistributions) {
  const auto g = testing::small_entry_game(-1.0, 0.5);
  const auto cat = compute_equilibria(g, EqSolver::kPureNe);
  const auto rule = SelectionRule::invariant_by_state(SelectionRule::Fallback::kHashed, 42);
  const auto a = rule.weights(g, 0, cat.states[0]);
  EXPECT_EQ(a, rule.weights(g, 0, cat.states[0]));
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 1.0, 1e-15);
  const auto other = SelectionRule::invariant_by_state(SelectionRule::Fallback::kHashed, 43);
  EXPECT_NE(a, other.weights(g, 0, cat.states[0]));
}

TEST(Selection, ExplicitWeightsOverrideTheFallback) {
  const auto g = testing::small_entry_game(-1.0, 0.5);
  const auto cat = compute_equilibria(g, EqSolver::kPureNe);
  auto rule = SelectionRule::invariant_by_state();
  rule.set_weights(g.state(0), cat.states[0].fingerprint, {0.25, 0.75});
  EXPECT_EQ(rule.weights(g, 0, cat.states[0]), (std::vector<double>{0.25, 0.75}));
  EXPECT_EQ(rule.weights(g, 1, cat.states[1]), (std::vector<double>{0.5, 0.5}));
}

TEST(Selection, ReducedFormRowsAreDistributions) {
  for (int k = 0; k < 20; ++k) {
    const auto inst = random_instance(8, k);
    const auto rho = reduced_form(inst.game, inst.rule, inst.solver);
    for (int w = 0; w < rho.num_states(); ++w) {
      if (!rho.defined(w)) continue;
      const auto s = rho.slice(w);
      EXPECT_NEAR(std::accumulate(s.begin(), s.end(), 0.0), 1.0, 1e-12);
    }
  }
}

TEST(Invariance, HoldsForStateRulesAndFailsForLabelRules) {
  const auto inst = label_dependent_instance();
  const auto post = policy_image(inst.game, inst.policy).game;
  EXPECT_TRUE(check_invariance(SelectionRule::invariant_by_state(), inst.game, post,
                               EqSolver::kPureNe).holds);
  const auto bad = check_invariance(inst.rule, inst.game, post, EqSolver::kPureNe);
  EXPECT_FALSE(bad.holds);
  EXPECT_GT(bad.states_compared, 0);
  EXPECT_FALSE(bad.detail.empty());
}

TEST(ConditionalMean, AveragesOverUnobservedShocks) {
  EntryGameParams p;
  p.beta = {{0.0}, {0.0}};
  p.x_columns = {Coordinate{"x_0_1"}};
  p.x_grid = {{{0.0}, 1.0}};
  // eps 1.5: both enter; eps -0.5: nobody enters.
  p.eps_grid = {{{1.5, 1.5}, 0.25}, {{-0.5, -0.5}, 0.75}};
  const auto g = build_entry_game(p);
  const auto rho = reduced_form(g, SelectionRule::first_listed(), EqSolver::kPureNe);
  const auto m = conditional_mean(g, rho, std::vector<double>{0.0});
  ASSERT_TRUE(m.has_value());
  EXPECT_DOUBLE_EQ((*m)[0], 0.25);
  EXPECT_DOUBLE_EQ((*m)[1], 0.25);
  EXPECT_FALSE(conditional_mean(g, rho, std::vector<double>{3.0}).has_value());
}

TEST(ThresholdSolver, PublicPrivateOutcomesAreDistributions) {
  for (int k = 0; k < 5; ++k) {
    const auto g = random_public_private_game(2, k);
    const auto cat = compute_equilibria(g, EqSolver::kThreshold);
    for (const auto& s : cat.states) {
      EXPECT_FALSE(s.outcomes.empty());
      for (const auto& o : s.outcomes) {
        EXPECT_NEAR(std::accumulate(o.begin(), o.end(), 0.0), 1.0, 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace gamecf
