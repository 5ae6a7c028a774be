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

#include "gamecf/report.hpp"

#include <sstream>

namespace gamecf {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json bound_to_json(const PredictionBound& b, std::optional<double> ep) {
  nlohmann::json j = {{"target", b.target},
                      {"conditioning", b.conditioning},
                      {"dp", b.dp},
                      {"eb", b.eb},
                      {"lower", b.lower},
                      {"upper", b.upper},
                      {"assumptions",
                       {{"policy_admissible", b.admissible},
                        {"invariance_flag", b.invariance_checked}}}};
  if (ep) j["ep"] = *ep;
  return j;
}

std::string bounds_to_csv(const std::vector<PredictionBound>& bounds,
                          const std::vector<std::optional<double>>& ep) {
  std::ostringstream os;
  os << "target,conditioning,dp,eb,lower,upper,ep\n";
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    const auto& b = bounds[k];
    os << csv_field(b.target) << ',' << csv_field(b.conditioning) << ',' << format_double(b.dp)
       << ',' << format_double(b.eb) << ',' << format_double(b.lower) << ','
       << format_double(b.upper) << ',';
    if (k < ep.size() && ep[k]) os << format_double(*ep[k]);
    os << '\n';
  }
  return os.str();
}

std::string plot_to_csv(const std::vector<PlotPoint>& points) {
  std::ostringstream os;
  os << "x,lower,dp,upper\n";
  for (const auto& p : points) {
    os << format_double(p.x) << ',' << format_double(p.lower) << ',' << format_double(p.dp) << ','
       << format_double(p.upper) << '\n';
  }
  return os.str();
}

nlohmann::json engine_to_json(const EngineReport& r, const std::vector<std::string>& players) {
  nlohmann::json est = nlohmann::json::object();
  nlohmann::json se = nlohmann::json::object();
  for (std::size_t i = 0; i < players.size(); ++i) {
    est[players[i]] = r.estimate.at(i);
    if (!r.se.empty()) se[players[i]] = r.se.at(i);
  }
  nlohmann::json j = {{"engine", r.engine},
                      {"target", r.target},
                      {"estimate", est},
                      {"se", r.se.empty() ? nlohmann::json(nullptr) : se},
                      {"B", r.replications},
                      {"bandwidths", r.bandwidths},
                      {"dropped_markets", r.dropped_markets},
                      {"support_rule", r.support_rule}};
  return j;
}

std::string engines_to_csv(const std::vector<EngineReport>& reports,
                           const std::vector<std::string>& players) {
  std::ostringstream os;
  os << "engine,target,row";
  for (const auto& p : players) os << ',' << csv_field(p);
  os << '\n';
  for (const auto& r : reports) {
    os << csv_field(r.engine) << ',' << csv_field(r.target) << ",estimate";
    for (double v : r.estimate) os << ',' << format_double(v);
    os << '\n';
    if (!r.se.empty()) {
      os << csv_field(r.engine) << ',' << csv_field(r.target) << ",se";
      for (double v : r.se) os << ',' << format_double(v);
      os << '\n';
    }
  }
  return os.str();
}

nlohmann::json provenance_to_json(const Provenance& p) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(p.game_hash));
  return {{"seed", p.seed}, {"game_hash", hash}, {"selection", p.selection}, {"solver", p.solver}};
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace gamecf
