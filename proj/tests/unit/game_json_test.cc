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

#include <nlohmann/json.hpp>
#include <string>

#include "gamecf/error.hpp"
#include "gamecf/game_json.hpp"

namespace gamecf {
namespace {

using nlohmann::json;

json entry_config() {
  return json::parse(R"({
    "type": "entry",
    "delta": -1.0,
    "beta": [[0.5], [0.5]],
    "x_columns": ["d"],
    "x_grid": {"points": [[0], [1]]},
    "eps_grid": {"normal": 3}
  })");
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "config_error");
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return "";
}

TEST(ConfigParse, SyntaxErrorsCarryLineAndColumn) {
  const auto msg = error_of([] { parse_config("{\n  \"a\": 1,\n  oops\n}", "cfg.json"); });
  EXPECT_NE(msg.find("cfg.json:3:"), std::string::npos) << msg;
}

TEST(GameJson, EntryGameWithGridShorthands) {
  const auto g = game_from_json(entry_config());
  // 2 covariate rows times 3 x 3 normal shock points.
  EXPECT_EQ(g.num_states(), 18);
  EXPECT_NEAR(g.weight(0), 0.5 / 9.0, 1e-15);
  EXPECT_EQ(g.layout()[0].name, "d");
  // Midpoint quantiles are symmetric around zero.
  EXPECT_NEAR(g.state(0)[1], -g.state(2)[2], 1e-15);
  EXPECT_NEAR(g.state(4)[1], 0.0, 1e-15);
}

TEST(GameJson, BadWeightsNameTheGrid) {
  auto cfg = entry_config();
  cfg["x_grid"] = json::parse(R"([{"values": [0], "weight": 0.5}, {"values": [1], "weight": 0.4}])");
  const auto msg = error_of([&] { game_from_json(cfg); });
  EXPECT_NE(msg.find("game.x_grid"), std::string::npos) << msg;
  EXPECT_NE(msg.find("0.9"), std::string::npos) << msg;
}

TEST(GameJson, MissingAndMistypedFields) {
  auto cfg = entry_config();
  cfg.erase("delta");
  EXPECT_NE(error_of([&] { game_from_json(cfg); }).find("delta"), std::string::npos);
  cfg = entry_config();
  cfg["beta"] = json::parse("[[0.5]]");
  EXPECT_NE(error_of([&] { game_from_json(cfg); }).find("beta"), std::string::npos);
  cfg = entry_config();
  cfg["type"] = "poker";
  EXPECT_NE(error_of([&] { game_from_json(cfg); }).find("poker"), std::string::npos);
}

TEST(GameJson, Auction) {
  const auto g = game_from_json(json::parse(R"({
    "type": "auction", "bidders": 2,
    "value_grid": {"points": [[1], [2]]},
    "reserve_grid": [{"values": [0], "weight": 1}]
  })"));
  EXPECT_EQ(g.num_players(), 2);
  EXPECT_EQ(g.num_states(), 4);
}

TEST(PolicyJson, RoundTrips) {
  for (const char* text : {
           R"({"type": "identity"})",
           R"({"type": "set_constant", "coordinate": "d", "value": 0})",
           R"({"type": "shift", "coordinate": "x", "amount": 0.5})",
           R"({"type": "table", "coordinates": ["d"], "entries": [{"from": [1], "to": [0]}]})",
           R"([{"type": "shift", "coordinate": "x", "amount": 1},
               {"type": "set_constant", "coordinate": "d", "value": 1}])"}) {
    const auto p = policy_from_json(json::parse(text));
    const auto back = policy_from_json(policy_to_json(p));
    EXPECT_EQ(policy_to_json(back), policy_to_json(p)) << text;
  }
  EXPECT_NE(error_of([] { policy_from_json(json::parse(R"({"type": "shift"})")); }).find("policy"),
            std::string::npos);
}

TEST(SelectionJson, ModesAndPlayerNumbering) {
  EXPECT_EQ(selection_from_json(json("first_listed"), 2).mode(), SelectionRule::Mode::kFirstListed);
  const auto fav = selection_from_json(json::parse(R"({"mode": "player_favored", "player": 2})"), 2);
  EXPECT_EQ(fav.mode(), SelectionRule::Mode::kPlayerFavored);
  EXPECT_EQ(fav.player(), 1);
  EXPECT_EQ(selection_from_json(json::parse(R"({"mode": "invariant", "fallback": "hashed", "seed": 3})"), 2)
                .mode(),
            SelectionRule::Mode::kInvariantByState);
  const auto msg = error_of(
      [] { selection_from_json(json::parse(R"({"mode": "player_favored", "player": 3})"), 2); });
  EXPECT_NE(msg.find("out of range"), std::string::npos) << msg;
  EXPECT_THROW(selection_from_json(json::parse(R"({"mode": "random"})"), 2), Error);
}

TEST(FunctionalJson, BuildsEveryKind) {
  const auto g = game_from_json(entry_config());
  const auto h = functional_from_json(json::parse(R"({"type": "expected_action", "player": 2})"), g);
  const std::vector<double> y{0.0, 1.0};
  EXPECT_EQ(h(y, g.state(0)), 1.0);
  const auto c = functional_from_json(json::parse(R"({"type": "cdf", "t": [0, 0]})"), g);
  EXPECT_EQ(c(y, g.state(0)), 0.0);
  const auto mx = functional_from_json(json::parse(R"({"type": "max_cdf", "t": 1})"), g);
  EXPECT_EQ(mx(y, g.state(0)), 1.0);
  EXPECT_THROW(functional_from_json(json::parse(R"({"type": "expected_action", "player": 0})"), g),
               Error);
}

TEST(ConditioningJson, RangesAndKeywords) {
  const StateLayout layout({{"d"}});
  const auto C = conditioning_from_json(json::parse(R"({"coordinate": "d", "lo": 0.5})"));
  EXPECT_TRUE(C(layout, std::vector<double>{1.0}));
  EXPECT_FALSE(C(layout, std::vector<double>{0.0}));
  EXPECT_FALSE(conditioning_from_json(json("none"))(layout, std::vector<double>{1.0}));
}

TEST(KernelJson, Fields) {
  const auto k = kernel_config_from_json(
      json::parse(R"({"family": "epanechnikov", "bandwidth": 0.3, "discrete": ["d"]})"));
  EXPECT_EQ(k.family, KernelFamily::kEpanechnikov);
  EXPECT_EQ(k.bandwidth, 0.3);
  EXPECT_EQ(k.discrete, std::vector<std::string>{"d"});
  EXPECT_THROW(kernel_config_from_json(json::parse(R"({"family": "box"})")), Error);
}

}  // namespace
}  // namespace gamecf
