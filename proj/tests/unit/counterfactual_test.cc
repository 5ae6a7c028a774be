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

#include <cmath>
#include <vector>

#include "gamecf/counterfactual.hpp"
#include "gamecf/error.hpp"
#include "gamecf/instances.hpp"
#include "test_util.hpp"

namespace gamecf {
namespace {

// x in {0 (0.6), 1 (0.4)}, eps = 1/2, beta = 1: two entry equilibria at
// x = 0; both firms enter at x >= 1. Shifting x by one sends x = 1 to the
// unseen x = 2.
struct ShiftCase {
  FiniteGame game = testing::small_entry_game(-1.0, 0.5, 1.0);
  Policy policy = Policy::additive_shift("x_0_1", 1.0);
  SelectionRule rule = SelectionRule::invariant_by_state();
  ReducedForm pre = reduced_form(game, rule, EqSolver::kPureNe);
};

TEST(Counterfactual, ShiftBoundsByHand) {
  ShiftCase c;
  const auto h = make_expected_action(c.game, 0);
  const auto b = bounds(c.pre, c.game, c.policy, h);
  // dp = 0.6 E[Y_1 | x = 1] = 0.6; EB = 0.4; h in [0, 1].
  EXPECT_NEAR(b.dp, 0.6, 1e-15);
  EXPECT_NEAR(b.eb, 0.4, 1e-15);
  EXPECT_NEAR(b.lower, 0.6, 1e-15);
  EXPECT_NEAR(b.upper, 1.0, 1e-15);
  EXPECT_TRUE(b.admissible);
  // Both firms enter at x = 2 as well, so the upper bound is attained.
  EXPECT_NEAR(ep(c.game, c.policy, c.rule, EqSolver::kPureNe, h), 1.0, 1e-15);
}

TEST(Counterfactual, ConditioningRestrictsBothTerms) {
  ShiftCase c;
  const auto h = make_expected_action(c.game, 1);
  const auto C = ConditioningSet::range("x_0_1", -10.0, 1.5);
  EXPECT_NEAR(error_bound(c.game, c.policy, C), 0.0, 1e-15);
  EXPECT_NEAR(dp(c.pre, c.game, c.policy, h, C), 0.6, 1e-15);
  const auto none = ConditioningSet::none();
  EXPECT_EQ(dp(c.pre, c.game, c.policy, h, none), 0.0);
}

TEST(Counterfactual, AverageEffectBounds) {
  ShiftCase c;
  const auto e = average_effect(c.pre, c.game, c.policy, 0);
  // E[Y_1] = 0.6 * 0.5 + 0.4 * 1 = 0.7.
  EXPECT_NEAR(e.mean, 0.7, 1e-15);
  EXPECT_NEAR(e.adp, 0.6, 1e-15);
  EXPECT_NEAR(e.lower, -0.1, 1e-15);
  EXPECT_NEAR(e.upper, 0.3, 1e-15);
}

TEST(Counterfactual, DummyToZeroIsExact) {
  for (int k = 0; k < 10; ++k) {
    const auto inst = dummy_to_zero_instance(12, k);
    const auto pre = reduced_form(inst.game, inst.rule, inst.solver);
    const auto b = bounds(pre, inst.game, inst.policy, inst.h, inst.C);
    EXPECT_EQ(b.eb, 0.0);
    EXPECT_EQ(b.lower, b.upper);
    EXPECT_NEAR(ep(inst.game, inst.policy, inst.rule, inst.solver, inst.h, inst.C), b.dp, 1e-12);
  }
}

TEST(Counterfactual, IdentityPolicyReproducesThePrePolicyMean) {
  const auto inst = random_instance(21, 0);
  const auto pre = reduced_form(inst.game, inst.rule, inst.solver);
  const auto b = bounds(pre, inst.game, Policy::identity(), inst.h);
  EXPECT_EQ(b.eb, 0.0);
  EXPECT_NEAR(b.dp, ep(inst.game, Policy::identity(), inst.rule, inst.solver, inst.h), 1e-12);
}

TEST(Counterfactual, RefusesInadmissiblePolicies) {
  ShiftCase c;
  try {
    bounds(c.pre, c.game, Policy::additive_shift("eps_1", 1.0), make_expected_action(c.game, 0));
    FAIL() << "expected policy_not_admissible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "policy_not_admissible");
  }
}

TEST(Counterfactual, LabelDependentSelectionEscapesTheBounds) {
  const auto inst = label_dependent_instance();
  const auto pre = reduced_form(inst.game, inst.rule, inst.solver);
  const auto b = bounds(pre, inst.game, inst.policy, inst.h, inst.C);
  const double e = ep(inst.game, inst.policy, inst.rule, inst.solver, inst.h, inst.C);
  EXPECT_GT(std::max(b.lower - e, e - b.upper), 0.05);
}

TEST(Sharpness, ConstructionAttainsBothSides) {
  ShiftCase c;
  const auto h = make_expected_action(c.game, 0);
  const auto pre_b = bounds(c.pre, c.game, c.policy, h);
  for (auto side : {BoundSide::kLower, BoundSide::kUpper}) {
    const auto s = sharpness_game(c.game, c.policy, h, side, 1e-6);
    const auto rho = reduced_form(s.game, s.rule, s.solver);
    const auto b = bounds(rho, s.game, c.policy, h);
    const double e = ep(s.game, c.policy, s.rule, s.solver, h);
    const double target = side == BoundSide::kLower ? b.lower : b.upper;
    EXPECT_NEAR(e, target, 1e-6);
    EXPECT_LE(s.slack, 1e-6);
    EXPECT_NEAR(b.eb, pre_b.eb, 1e-15);
  }
}

}  // namespace
}  // namespace gamecf
