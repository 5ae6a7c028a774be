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

#include <vector>

#include "gamecf/error.hpp"
#include "gamecf/game.hpp"
#include "test_util.hpp"

namespace gamecf {
namespace {

TEST(ProfileSpace, LastPlayerVariesFastest) {
  ProfileSpace ps({2, 3});
  EXPECT_EQ(ps.size(), 6);
  EXPECT_EQ(ps.decode(0), (std::vector<int>{0, 0}));
  EXPECT_EQ(ps.decode(1), (std::vector<int>{0, 1}));
  EXPECT_EQ(ps.decode(3), (std::vector<int>{1, 0}));
  for (int y = 0; y < ps.size(); ++y) {
    const auto a = ps.decode(y);
    EXPECT_EQ(ps.encode(a), y);
    EXPECT_EQ(ps.action_of(y, 1), a[1]);
  }
  EXPECT_EQ(ps.with_action(ps.encode(std::vector<int>{1, 2}), 0, 0),
            ps.encode(std::vector<int>{0, 2}));
}

TEST(EntryGame, PayoffsFollowTheLinearIndex) {
  EntryGameParams p;
  p.players = 2;
  p.delta = -1.5;
  p.beta = {{0.5}, {-2.0}};
  p.x_columns = {Coordinate{"x_0_1"}};
  p.x_grid = {{{2.0}, 1.0}};
  p.eps_grid = {{{0.25, 3.0}, 1.0}};
  const auto g = build_entry_game(p);
  ASSERT_EQ(g.num_states(), 1);
  const int both = g.profiles().encode(std::vector<int>{1, 1});
  const int first = g.profiles().encode(std::vector<int>{1, 0});
  // u_1 = delta y_2 + 2 * 0.5 + 0.25, u_2 = delta y_1 + 2 * (-2) + 3.
  EXPECT_DOUBLE_EQ(g.payoff(0, first, 0), 1.25);
  EXPECT_DOUBLE_EQ(g.payoff(0, both, 0), -0.25);
  EXPECT_DOUBLE_EQ(g.payoff(1, both, 0), -2.5);
  EXPECT_DOUBLE_EQ(g.payoff(1, first, 0), 0.0);
}

TEST(EntryGame, ShocksAreUnobservedPrivateCoordinates) {
  const auto g = testing::small_entry_game();
  const auto& layout = g.layout();
  ASSERT_EQ(layout.size(), 3);
  EXPECT_TRUE(layout[0].observed);
  EXPECT_FALSE(layout[layout.index_of("eps_1")].observed);
  EXPECT_EQ(layout[layout.index_of("eps_2")].owner, 1);
  EXPECT_EQ(layout.observed_indices(), std::vector<int>{0});
}

TEST(EntryGame, RejectsWeightsThatDoNotSumToOne) {
  EntryGameParams p;
  p.beta = {{0.0}, {0.0}};
  p.x_grid = {{{0.0}, 0.5}, {{1.0}, 0.4}};
  p.eps_grid = {{{0.0, 0.0}, 1.0}};
  try {
    build_entry_game(p);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("x_grid"), std::string::npos) << e.what();
  }
}

TEST(EntryGame, DefaultCovariateNames) {
  EXPECT_EQ(default_covariate_name(-1, 1), "x_0_1");
  EXPECT_EQ(default_covariate_name(1, 2), "x_2_2");
}

TEST(Policy, StepsApplyInOrder) {
  const StateLayout layout({{"a"}, {"b"}});
  const std::vector<double> w{1.0, 2.0};
  EXPECT_EQ(Policy::identity().apply(layout, w), w);
  EXPECT_EQ(Policy::set_constant("a", 7.0).apply(layout, w), (std::vector<double>{7.0, 2.0}));
  EXPECT_EQ(Policy::additive_shift("b", -0.5).apply(layout, w), (std::vector<double>{1.0, 1.5}));
  const auto tab = Policy::table({"a", "b"}, {{{1.0, 2.0}, {0.0, 0.0}}});
  EXPECT_EQ(tab.apply(layout, w), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(tab.apply(layout, std::vector<double>{1.0, 3.0}), (std::vector<double>{1.0, 3.0}));
  const auto composite = Policy::additive_shift("a", 1.0).then(Policy::set_constant("a", 5.0));
  EXPECT_EQ(composite.apply(layout, w), (std::vector<double>{5.0, 2.0}));
  EXPECT_EQ(composite.targets(), std::vector<std::string>{"a"});
}

TEST(PolicyImage, KeepsPreIndicesAndAppendsOffGridImages) {
  const auto g = testing::small_entry_game();
  const auto img = policy_image(g, Policy::additive_shift("x_0_1", 1.0));
  ASSERT_EQ(img.image.size(), 2u);
  // x = 0 -> 1 is on the grid (state 1); x = 1 -> 2 is new (state 2).
  EXPECT_EQ(img.image[0], 1);
  EXPECT_EQ(img.image[1], 2);
  const auto& post = img.game;
  ASSERT_EQ(post.num_states(), 3);
  EXPECT_DOUBLE_EQ(post.weight(0), 0.0);
  EXPECT_DOUBLE_EQ(post.weight(1), 0.6);
  EXPECT_DOUBLE_EQ(post.weight(2), 0.4);
  EXPECT_FALSE(post.off_support(1));
  EXPECT_TRUE(post.off_support(2));
  EXPECT_EQ(post.regime(), Regime::kPost);
  EXPECT_DOUBLE_EQ(post.state(2)[0], 2.0);
}

TEST(PolicyImage, ToleranceSnapsNearbyImagesOntoTheGrid) {
  const auto g = testing::small_entry_game();
  const auto img = policy_image(g, Policy::additive_shift("x_0_1", 1.0 + 1e-12));
  EXPECT_EQ(img.image[0], 1);
}

TEST(Admissibility, RejectsUnobservedAndUnknownCoordinates) {
  const auto g = testing::small_entry_game();
  EXPECT_TRUE(check_policy_admissible(g, Policy::set_constant("x_0_1", 0.0)).holds);
  const auto bad = check_policy_admissible(g, Policy::additive_shift("eps_1", 1.0));
  EXPECT_FALSE(bad.holds);
  EXPECT_FALSE(bad.reasons.empty());
  EXPECT_FALSE(check_policy_admissible(g, Policy::set_constant("nope", 0.0)).holds);
  try {
    apply_policy(g, Policy::additive_shift("eps_2", 1.0));
    FAIL() << "expected policy_not_admissible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "policy_not_admissible");
  }
}

TEST(GameHash, StableAndSensitive) {
  EXPECT_EQ(game_hash(testing::small_entry_game()), game_hash(testing::small_entry_game()));
  EXPECT_NE(game_hash(testing::small_entry_game(-1.0)), game_hash(testing::small_entry_game(-0.5)));
}

TEST(Auction, ActionsAreNoBidThenValues) {
  const auto g = build_second_price_auction(2, {{{1.0}, 0.5}, {{2.0}, 0.5}}, {{{0.0}, 1.0}});
  EXPECT_EQ(g.actions(0), (std::vector<double>{0.0, 1.0, 2.0}));
  // Independent values for each bidder.
  EXPECT_EQ(g.num_states(), 4);
}

}  // namespace
}  // namespace gamecf
