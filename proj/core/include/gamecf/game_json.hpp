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


#ifndef GAMECF_GAME_JSON_HPP_
#define GAMECF_GAME_JSON_HPP_

#include <nlohmann/json.hpp>
#include <string>

#include "gamecf/estimators.hpp"
#include "gamecf/functional.hpp"
#include "gamecf/game.hpp"
#include "gamecf/selection.hpp"

namespace gamecf {

// JSON configuration readers. Every failure is Error("config_error") whose
// message starts with the offending field path, e.g. "game.x_grid: ...".
// Player numbers in configs are 1-based.

// Parses a JSON document; syntax errors report the line and column.
nlohmann::json parse_config(const std::string& text, const std::string& source = "<config>");
nlohmann::json read_config(const std::string& path);

// "type": "entry" (x_grid x eps_grid product), "entry_joint" (joint_grid) or
// "auction" (bidders, value_grid, reserve_grid).
FiniteGame game_from_json(const nlohmann::json& j, const std::string& field = "game");

// Single step object or an array of steps applied in order. Step types:
// "identity", "set_constant", "shift", "table".
Policy policy_from_json(const nlohmann::json& j, const std::string& field = "policy");
// Inverse of policy_from_json (always an array of steps).
nlohmann::json policy_to_json(const Policy& policy);

// String shorthand ("invariant", "first_listed") or an object with "mode".
SelectionRule selection_from_json(const nlohmann::json& j, int num_players,
                                  const std::string& field = "selection");

EqSolver solver_from_json(const nlohmann::json& j, const std::string& field = "solver");

// "type": expected_action | cdf | max_cdf | quadratic_loss | revenue.
OutcomeFunctional functional_from_json(const nlohmann::json& j, const FiniteGame& game,
                                       const std::string& field = "functional");

// "all", "none" or {"coordinate", "lo", "hi"}.
ConditioningSet conditioning_from_json(const nlohmann::json& j,
                                       const std::string& field = "conditioning");

KernelConfig kernel_config_from_json(const nlohmann::json& j, const std::string& field = "kernel");

}  // namespace gamecf

#endif  // GAMECF_GAME_JSON_HPP_
