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
#include <map>
#include <random>
#include <vector>

#include "gamecf/counterfactual.hpp"
#include "gamecf/error.hpp"
#include "gamecf/estimators.hpp"
#include "gamecf/instances.hpp"
#include "gamecf/simulate.hpp"

namespace gamecf {
namespace {

// x in {0, 1, 2}, d in {0, 1}; cell (x = 2, d = 0) is empty when `hole`.
Dataset discrete_sample(int M, std::uint64_t seed, bool hole = true) {
  Dataset data({"y_1"}, {"x", "d"});
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int m = 0; m < M; ++m) {
    const double x = static_cast<double>(gen() % 3);
    const double d = hole && x == 2.0 ? 1.0 : static_cast<double>(gen() % 2);
    data.add(m + 1, std::vector<double>{x + d + U(gen)}, std::vector<double>{x, d});
  }
  return data;
}

TEST(KernelAdp, DiscreteCellsMatchLeaveOneOutAverages) {
  const auto data = discrete_sample(300, 1);
  const int M = data.num_markets();
  KernelConfig cfg;
  cfg.bandwidth = 1.0;
  cfg.discrete = {"x", "d"};
  const auto est = estimate_adp(data, Policy::set_constant("d", 0.0), cfg);

  std::map<double, std::pair<double, int>> cell;  // x -> (sum, count) over d = 0 rows
  for (int m = 0; m < M; ++m) {
    if (data.x(m, 1) == 0.0) {
      cell[data.x(m, 0)].first += data.y(m, 0);
      cell[data.x(m, 0)].second += 1;
    }
  }
  double sum = 0.0;
  int off = 0;
  int dropped = 0;
  for (int m = 0; m < M; ++m) {
    auto it = cell.find(data.x(m, 0));
    if (it == cell.end()) {
      ++off;
      continue;
    }
    double s = it->second.first;
    int c = it->second.second;
    if (data.x(m, 1) == 0.0) {
      s -= data.y(m, 0);
      c -= 1;
    }
    if (c == 0) {
      ++dropped;
      continue;
    }
    sum += s / c;
  }
  ASSERT_GT(off, 0);
  EXPECT_NEAR(est.adp[0], sum / (M - dropped), 1e-12);
  EXPECT_NEAR(est.eb[0], static_cast<double>(off) / M, 1e-15);
  EXPECT_EQ(est.dropped[0], dropped);
  EXPECT_NEAR(est.delta[0], est.adp[0] - est.mean[0], 1e-15);
}

TEST(KernelAdp, ConditioningAndMarketSubsets) {
  const auto data = discrete_sample(200, 2);
  KernelConfig cfg;
  cfg.bandwidth = 1.0;
  cfg.discrete = {"x", "d"};
  const auto policy = Policy::set_constant("d", 0.0);
  const auto none = estimate_adp(data, policy, cfg, ConditioningSet::none());
  EXPECT_EQ(none.adp[0], 0.0);
  EXPECT_EQ(none.eb[0], 0.0);
  std::vector<int> first{0, 1, 2, 3, 4};
  const auto sub = estimate_adp(data, policy, cfg, ConditioningSet::all(), first);
  EXPECT_EQ(sub.markets, 5);
}

TEST(KernelAdp, CrossValidatesWhenNoBandwidthIsGiven) {
  const auto data = simulate(estimation_game(), SelectionRule::invariant_by_state(),
                             EqSolver::kPureNe, 800, 4);
  KernelConfig cfg;
  cfg.discrete = {"d"};
  cfg.grid = {0.05, 0.1, 0.2, 0.4};
  const auto est = estimate_adp(data, Policy::set_constant("d", 0.0), cfg);
  ASSERT_EQ(est.bandwidth.size(), 2u);
  for (double h : est.bandwidth) {
    EXPECT_TRUE(h == 0.05 || h == 0.1 || h == 0.2 || h == 0.4) << h;
  }
}

TEST(KernelAdp, RejectsPoliciesOnUnknownColumns) {
  const auto data = discrete_sample(50, 3);
  KernelConfig cfg;
  cfg.bandwidth = 1.0;
  EXPECT_THROW(estimate_adp(data, Policy::set_constant("nope", 0.0), cfg), Error);
}

// Y = 1 + 2 x - 3 d exactly, so switching d off raises Y by 3 d.
Dataset linear_sample(double x_scale) {
  Dataset data({"y_1", "y_2"}, {"x", "d"});
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int m = 0; m < 400; ++m) {
    const double x = U(gen);
    const double d = U(gen) < 0.3 ? 1.0 : 0.0;
    data.add(m + 1, std::vector<double>{1 + 2 * x - 3 * d, U(gen)},
             std::vector<double>{x * x_scale, d});
  }
  return data;
}

TEST(Ols, ExactLinearModel) {
  const auto data = linear_sample(1.0);
  double dbar = 0.0;
  for (int m = 0; m < data.num_markets(); ++m) dbar += data.x(m, 1);
  dbar /= data.num_markets();
  const auto e = ols_effect(data, Policy::set_constant("d", 0.0));
  EXPECT_NEAR(e.gamma[0][0], 1.0, 1e-12);
  EXPECT_NEAR(e.gamma[0][1], 2.0, 1e-12);
  EXPECT_NEAR(e.gamma[0][2], -3.0, 1e-12);
  EXPECT_NEAR(e.delta[0], 3.0 * dbar, 1e-12);
  EXPECT_EQ(e.regressors, (std::vector<std::string>{"(intercept)", "x", "d"}));
  const auto id = ols_effect(data, Policy::identity());
  EXPECT_NEAR(id.delta[0], 0.0, 1e-12);
  EXPECT_NEAR(id.delta[1], 0.0, 1e-12);
}

TEST(Ols, InvariantToRescalingACovariate) {
  const auto policy = Policy::set_constant("d", 0.0);
  const auto a = ols_effect(linear_sample(1.0), policy);
  const auto b = ols_effect(linear_sample(1000.0), policy);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(a.delta[i], b.delta[i], 1e-10);
}

TEST(Ols, RankDeficiencyNamesTheColumns) {
  Dataset data({"y_1"}, {"x", "x_copy"});
  for (int m = 0; m < 20; ++m) {
    const double x = m * 0.1;
    data.add(m + 1, std::vector<double>{x}, std::vector<double>{x, x});
  }
  try {
    ols_effect(data, Policy::identity());
    FAIL() << "expected rank_deficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "rank_deficient");
    const std::string msg = e.what();
    EXPECT_TRUE(msg.find("x") != std::string::npos) << msg;
  }
}

TEST(ControlFunction, RemovesConfoundingByAnObservedControl) {
  const auto game = confounded_game();
  const auto rule = SelectionRule::invariant_by_state();
  const auto policy = Policy::set_constant("d", 0.0);
  const auto rf = reduced_form(game, rule, EqSolver::kPureNe);
  const double exact = dp(rf, game, policy, make_expected_action(game, 0));

  const auto data = simulate(game, rule, EqSolver::kPureNe, 20000, 6);
  KernelConfig cfg;
  cfg.bandwidth = 1.0;
  cfg.discrete = {"d", "z"};
  const auto cf = control_function_adp(data, policy, cfg, {"z"});
  KernelConfig naive_cfg = cfg;
  naive_cfg.columns = {"d"};
  const auto naive = estimate_adp(data, policy, naive_cfg);
  // Binomial scale of a mean of 0/1 outcomes at M = 20000.
  const double se = 0.5 / std::sqrt(20000.0);
  EXPECT_LT(std::abs(cf.adp[0] - exact), 4 * se);
  EXPECT_GT(std::abs(naive.adp[0] - exact), 10 * se);
  EXPECT_EQ(cf.eb[0], 0.0);
}

TEST(ControlFunction, WithoutControlsEqualsTheKernelEstimator) {
  const auto data = discrete_sample(150, 7);
  KernelConfig cfg;
  cfg.bandwidth = 1.0;
  cfg.discrete = {"x", "d"};
  const auto policy = Policy::set_constant("d", 0.0);
  const auto a = control_function_adp(data, policy, cfg, {});
  const auto b = estimate_adp(data, policy, cfg);
  EXPECT_EQ(a.adp, b.adp);
  EXPECT_EQ(a.eb, b.eb);
  EXPECT_THROW(control_function_adp(data, Policy::set_constant("x", 0.0), cfg, {"x"}), Error);
}

TEST(Decomposition, OlsPolicyTermIsMinusTheDummyCoefficient) {
  const auto data = linear_sample(1.0);
  const auto dec = aggregate_decomposition(data, "d", Engine::kOls);
  const auto ols = ols_effect(data, Policy::identity());
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(dec.policy_effect[i], -ols.gamma[i][2], 1e-12);
    EXPECT_NEAR(dec.policy_effect[i] + dec.observable_effect[i], dec.raw_difference[i], 1e-12);
  }
  EXPECT_EQ(dec.treated + dec.control, data.num_markets());
}

TEST(Decomposition, DummyOnlyRegressionPutsEverythingInThePolicyTerm) {
  Dataset data({"y_1"}, {"d"});
  for (int m = 0; m < 10; ++m) {
    data.add(m + 1, std::vector<double>{m * 0.5}, std::vector<double>{m % 2 == 0 ? 1.0 : 0.0});
  }
  const auto dec = aggregate_decomposition(data, "d", Engine::kOls);
  EXPECT_NEAR(dec.observable_effect[0], 0.0, 1e-12);
  EXPECT_NEAR(dec.policy_effect[0], dec.raw_difference[0], 1e-12);
}

TEST(Decomposition, KernelEngineAndErrors) {
  const auto data = discrete_sample(300, 8, false);
  KernelConfig cfg;
  cfg.bandwidth = 1.0;
  cfg.discrete = {"x", "d"};
  const auto dec = aggregate_decomposition(data, "d", Engine::kKernel, cfg);
  EXPECT_NEAR(dec.policy_effect[0] + dec.observable_effect[0], dec.raw_difference[0], 1e-12);
  // Outcomes are x + d + U: switching d off lowers Y by one.
  EXPECT_NEAR(dec.policy_effect[0], -1.0, 0.15);

  Dataset all_treated({"y_1"}, {"d"});
  for (int m = 0; m < 5; ++m) all_treated.add(m + 1, std::vector<double>{1.0}, std::vector<double>{1.0});
  try {
    aggregate_decomposition(all_treated, "d", Engine::kOls);
    FAIL() << "expected empty_group";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "empty_group");
  }
  Dataset three({"y_1"}, {"d"});
  for (int m = 0; m < 6; ++m) three.add(m + 1, std::vector<double>{1.0}, std::vector<double>{m % 3 * 1.0});
  EXPECT_THROW(aggregate_decomposition(three, "d", Engine::kOls), Error);
}

}  // namespace
}  // namespace gamecf
