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


#ifndef GAMECF_REPORT_HPP_
#define GAMECF_REPORT_HPP_

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gamecf/counterfactual.hpp"
#include "gamecf/dataset.hpp"

namespace gamecf {

// {target, conditioning, dp, eb, lower, upper, ep?, assumptions{...}}.
nlohmann::json bound_to_json(const PredictionBound& b, std::optional<double> ep = std::nullopt);

// One row per bound: target,conditioning,dp,eb,lower,upper,ep.
std::string bounds_to_csv(const std::vector<PredictionBound>& bounds,
                          const std::vector<std::optional<double>>& ep = {});

struct PlotPoint {
  double x = 0.0;
  double lower = 0.0;
  double dp = 0.0;
  double upper = 0.0;
};

// x,lower,dp,upper.
std::string plot_to_csv(const std::vector<PlotPoint>& points);

// One engine's per-player output.
struct EngineReport {
  std::string engine;
  std::string target;                   // e.g. "delta", "adp", "eb"
  std::vector<double> estimate;         // per player
  std::vector<double> se;               // empty without bootstrap
  int replications = 0;
  std::vector<double> bandwidths;
  int dropped_markets = 0;
  std::string support_rule;
};

nlohmann::json engine_to_json(const EngineReport& r, const std::vector<std::string>& players);

// Table layout: engine,target,row,<player columns> with an "estimate" row and
// an "se" row per engine/target.
std::string engines_to_csv(const std::vector<EngineReport>& reports,
                           const std::vector<std::string>& players);

nlohmann::json provenance_to_json(const Provenance& p);

// Deterministic JSON text (sorted keys, two-space indent, trailing newline).
std::string dump_json(const nlohmann::json& j);

}  // namespace gamecf

#endif  // GAMECF_REPORT_HPP_
