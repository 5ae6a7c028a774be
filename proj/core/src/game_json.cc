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

#include "gamecf/game_json.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "gamecf/error.hpp"
#include "gamecf/io.hpp"

namespace gamecf {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error("config_error", field + ": " + msg);
}

const json& need(const json& j, const std::string& key, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(field + "." + key, "missing required field");
  return *it;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "expected a finite number");
  return v;
}

int as_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_vector(const json& j, const std::string& field) {
  if (j.is_number()) return {as_number(j, field)};
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t k = 0; k < j.size(); ++k) {
    v.push_back(as_number(j[k], field + "[" + std::to_string(k) + "]"));
  }
  return v;
}

std::vector<std::string> as_strings(const json& j, const std::string& field) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) fail(field, "expected an array of strings");
  std::vector<std::string> v;
  for (std::size_t k = 0; k < j.size(); ++k) {
    v.push_back(as_string(j[k], field + "[" + std::to_string(k) + "]"));
  }
  return v;
}

int player_of(const json& j, int num_players, const std::string& field) {
  const int p = as_int(j, field);
  if (p < 1 || p > num_players) {
    fail(field, "player " + std::to_string(p) + " out of range 1.." + std::to_string(num_players));
  }
  return p - 1;
}

// Standard-normal quantile midpoints, k equiprobable points per dimension.
std::vector<GridPoint> normal_grid(int k, int dims, const std::string& field) {
  if (k < 1 || dims < 1) fail(field, "normal grid needs a positive point count");
  boost::math::normal_distribution<double> z;
  std::vector<double> pts(k);
  for (int j = 0; j < k; ++j) pts[j] = boost::math::quantile(z, (j + 0.5) / k);
  std::vector<GridPoint> grid;
  std::vector<int> idx(dims, 0);
  const double w = std::pow(static_cast<double>(k), -dims);
  while (true) {
    GridPoint p;
    for (int d = 0; d < dims; ++d) p.values.push_back(pts[idx[d]]);
    p.weight = w;
    grid.push_back(std::move(p));
    int d = dims - 1;
    while (d >= 0 && ++idx[d] == k) idx[d--] = 0;
    if (d < 0) break;
  }
  return grid;
}

// Accepted forms: [{"values": [...], "weight": w}, ...];
// {"points": [...], "weights": [...]} with uniform weights when omitted;
// {"normal": k} for k quantile points per dimension.
std::vector<GridPoint> grid_from_json(const json& j, int dims, const std::string& field) {
  std::vector<GridPoint> grid;
  if (j.is_array()) {
    for (std::size_t r = 0; r < j.size(); ++r) {
      const std::string f = field + "[" + std::to_string(r) + "]";
      GridPoint p;
      p.values = as_vector(need(j[r], "values", f), f + ".values");
      p.weight = as_number(need(j[r], "weight", f), f + ".weight");
      grid.push_back(std::move(p));
    }
  } else if (j.is_object() && j.contains("normal")) {
    return normal_grid(as_int(j["normal"], field + ".normal"), dims, field);
  } else if (j.is_object()) {
    const json& pts = need(j, "points", field);
    if (!pts.is_array() || pts.empty()) fail(field + ".points", "expected a non-empty array");
    std::vector<double> w;
    if (j.contains("weights")) {
      w = as_vector(j["weights"], field + ".weights");
      if (w.size() != pts.size()) fail(field + ".weights", "length differs from points");
    } else {
      w.assign(pts.size(), 1.0 / static_cast<double>(pts.size()));
    }
    for (std::size_t r = 0; r < pts.size(); ++r) {
      grid.push_back({as_vector(pts[r], field + ".points[" + std::to_string(r) + "]"), w[r]});
    }
  } else {
    fail(field, "expected a grid");
  }
  if (grid.empty()) fail(field, "grid is empty");
  double total = 0.0;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    if (dims > 0 && static_cast<int>(grid[r].values.size()) != dims) {
      fail(field, "row " + std::to_string(r) + " has " + std::to_string(grid[r].values.size()) +
                      " values, expected " + std::to_string(dims));
    }
    if (!(grid[r].weight >= 0.0)) fail(field, "row " + std::to_string(r) + " has a negative weight");
    total += grid[r].weight;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", total);
    fail(field, std::string("weights sum to ") + buf + ", expected 1");
  }
  return grid;
}

InfoKind info_from_json(const json& j, const std::string& field) {
  const auto s = as_string(j, field);
  if (s == "complete") return InfoKind::kComplete;
  if (s == "public_private") return InfoKind::kPublicPrivate;
  fail(field, "unknown information structure '" + s + "'");
}

std::vector<Coordinate> columns_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  std::vector<Coordinate> cols;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string f = field + "[" + std::to_string(k) + "]";
    Coordinate c;
    if (j[k].is_string()) {
      c.name = j[k].get<std::string>();
    } else {
      if (j[k].contains("name")) c.name = as_string(j[k]["name"], f + ".name");
      if (j[k].contains("owner")) c.owner = as_int(j[k]["owner"], f + ".owner") - 1;
    }
    cols.push_back(std::move(c));
  }
  return cols;
}

template <typename F>
auto guarded(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == "config_error") throw;
    fail(field, e.what());
  }
}

}  // namespace

json parse_config(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n');
    const auto nl = text.rfind('\n', end == 0 ? 0 : end - 1);
    const std::size_t col = nl == std::string::npos ? end + 1 : end - nl;
    throw Error("config_error", source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                    ": invalid JSON");
  }
}

json read_config(const std::string& path) { return parse_config(read_file(path), path); }

FiniteGame game_from_json(const json& j, const std::string& field) {
  const auto type = as_string(need(j, "type", field), field + ".type");
  if (type == "entry" || type == "entry_joint") {
    const int n = j.contains("players") ? as_int(j["players"], field + ".players") : 2;
    if (n < 1) fail(field + ".players", "need at least one player");
    const double delta = as_number(need(j, "delta", field), field + ".delta");
    const json& bj = need(j, "beta", field);
    if (!bj.is_array() || static_cast<int>(bj.size()) != n) {
      fail(field + ".beta", "expected one coefficient list per player");
    }
    std::vector<std::vector<double>> beta;
    for (int i = 0; i < n; ++i) {
      beta.push_back(as_vector(bj[i], field + ".beta[" + std::to_string(i) + "]"));
    }
    const int dims = static_cast<int>(beta.front().size());
    for (int i = 1; i < n; ++i) {
      if (static_cast<int>(beta[i].size()) != dims) fail(field + ".beta", "ragged coefficient lists");
    }
    std::vector<Coordinate> cols;
    if (j.contains("x_columns")) cols = columns_from_json(j["x_columns"], field + ".x_columns");
    const InfoKind info = j.contains("information")
                              ? info_from_json(j["information"], field + ".information")
                              : InfoKind::kComplete;
    if (type == "entry") {
      EntryGameParams p;
      p.players = n;
      p.delta = delta;
      p.beta = beta;
      p.x_columns = cols;
      p.x_grid = grid_from_json(need(j, "x_grid", field), dims, field + ".x_grid");
      p.eps_grid = grid_from_json(need(j, "eps_grid", field), n, field + ".eps_grid");
      p.info = info;
      return guarded(field, [&] { return build_entry_game(p); });
    }
    auto joint = grid_from_json(need(j, "joint_grid", field), dims + n, field + ".joint_grid");
    return guarded(field, [&] { return build_entry_game_joint(n, delta, beta, cols, joint, info); });
  }
  if (type == "auction") {
    const int n = as_int(need(j, "bidders", field), field + ".bidders");
    auto values = grid_from_json(need(j, "value_grid", field), 1, field + ".value_grid");
    auto reserves = grid_from_json(need(j, "reserve_grid", field), 1, field + ".reserve_grid");
    return guarded(field, [&] { return build_second_price_auction(n, values, reserves); });
  }
  fail(field + ".type", "unknown game type '" + type + "'");
}

Policy policy_from_json(const json& j, const std::string& field) {
  if (j.is_array()) {
    Policy p;
    for (std::size_t k = 0; k < j.size(); ++k) {
      p = p.then(policy_from_json(j[k], field + "[" + std::to_string(k) + "]"));
    }
    return p;
  }
  if (j.is_null()) return Policy::identity();
  const auto type = as_string(need(j, "type", field), field + ".type");
  if (type == "identity") return Policy::identity();
  if (type == "set_constant") {
    return Policy::set_constant(as_string(need(j, "coordinate", field), field + ".coordinate"),
                                as_number(need(j, "value", field), field + ".value"));
  }
  if (type == "shift") {
    return Policy::additive_shift(as_string(need(j, "coordinate", field), field + ".coordinate"),
                                  as_number(need(j, "amount", field), field + ".amount"));
  }
  if (type == "table") {
    auto coords = as_strings(need(j, "coordinates", field), field + ".coordinates");
    const json& ej = need(j, "entries", field);
    if (!ej.is_array()) fail(field + ".entries", "expected an array");
    std::vector<Policy::TableEntry> entries;
    for (std::size_t k = 0; k < ej.size(); ++k) {
      const std::string f = field + ".entries[" + std::to_string(k) + "]";
      Policy::TableEntry e{as_vector(need(ej[k], "from", f), f + ".from"),
                           as_vector(need(ej[k], "to", f), f + ".to")};
      if (e.from.size() != coords.size() || e.to.size() != coords.size()) {
        fail(f, "entry width differs from the coordinate list");
      }
      entries.push_back(std::move(e));
    }
    return guarded(field, [&] { return Policy::table(coords, entries); });
  }
  fail(field + ".type", "unknown policy type '" + type + "'");
}

json policy_to_json(const Policy& policy) {
  json steps = json::array();
  for (const auto& s : policy.steps()) {
    switch (s.kind) {
      case Policy::Kind::kSetConstant:
        steps.push_back({{"type", "set_constant"}, {"coordinate", s.coordinates[0]}, {"value", s.value}});
        break;
      case Policy::Kind::kAdditiveShift:
        steps.push_back({{"type", "shift"}, {"coordinate", s.coordinates[0]}, {"amount", s.value}});
        break;
      case Policy::Kind::kTable: {
        json entries = json::array();
        for (const auto& e : s.table) entries.push_back({{"from", e.from}, {"to", e.to}});
        steps.push_back({{"type", "table"}, {"coordinates", s.coordinates}, {"entries", entries}});
        break;
      }
    }
  }
  return steps;
}

SelectionRule selection_from_json(const json& j, int num_players, const std::string& field) {
  const json obj = j.is_string() ? json{{"mode", j}} : j;
  const auto mode = as_string(need(obj, "mode", field), field + ".mode");
  if (mode == "invariant") {
    auto fb = SelectionRule::Fallback::kUniform;
    if (obj.contains("fallback")) {
      const auto s = as_string(obj["fallback"], field + ".fallback");
      if (s == "hashed") {
        fb = SelectionRule::Fallback::kHashed;
      } else if (s != "uniform") {
        fail(field + ".fallback", "unknown fallback '" + s + "'");
      }
    }
    std::uint64_t seed = 0;
    if (obj.contains("seed")) {
      if (!obj["seed"].is_number_unsigned()) fail(field + ".seed", "expected a non-negative integer");
      seed = obj["seed"].get<std::uint64_t>();
    }
    return SelectionRule::invariant_by_state(fb, seed);
  }
  if (mode == "first_listed") return SelectionRule::first_listed();
  if (mode == "player_favored") {
    return SelectionRule::player_favored(
        player_of(need(obj, "player", field), num_players, field + ".player"));
  }
  if (mode == "label_dependent") {
    return SelectionRule::label_dependent(
        as_vector(need(obj, "pre_weights", field), field + ".pre_weights"),
        as_vector(need(obj, "post_weights", field), field + ".post_weights"));
  }
  fail(field + ".mode", "unknown selection mode '" + mode + "'");
}

EqSolver solver_from_json(const json& j, const std::string& field) {
  const auto s = as_string(j, field);
  return guarded(field, [&] { return eq_solver_from_string(s); });
}

OutcomeFunctional functional_from_json(const json& j, const FiniteGame& game,
                                       const std::string& field) {
  const auto type = as_string(need(j, "type", field), field + ".type");
  const int n = game.num_players();
  if (type == "expected_action") {
    return make_expected_action(game, player_of(need(j, "player", field), n, field + ".player"));
  }
  if (type == "cdf") {
    auto t = as_vector(need(j, "t", field), field + ".t");
    if (static_cast<int>(t.size()) != n) fail(field + ".t", "need one threshold per player");
    return make_cdf(t);
  }
  if (type == "max_cdf") {
    std::vector<int> players;
    if (j.contains("players")) {
      const json& pj = j["players"];
      if (!pj.is_array()) fail(field + ".players", "expected an array");
      for (std::size_t k = 0; k < pj.size(); ++k) {
        players.push_back(player_of(pj[k], n, field + ".players[" + std::to_string(k) + "]"));
      }
    } else {
      for (int i = 0; i < n; ++i) players.push_back(i);
    }
    return make_max_cdf(as_number(need(j, "t", field), field + ".t"), players, n);
  }
  if (type == "quadratic_loss") {
    return make_quadratic_loss(game, player_of(need(j, "player", field), n, field + ".player"),
                               as_number(need(j, "target", field), field + ".target"));
  }
  if (type == "revenue") return guarded(field, [&] { return make_revenue(game); });
  fail(field + ".type", "unknown functional '" + type + "'");
}

ConditioningSet conditioning_from_json(const json& j, const std::string& field) {
  if (j.is_null()) return ConditioningSet::all();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "all") return ConditioningSet::all();
    if (s == "none") return ConditioningSet::none();
    fail(field, "unknown conditioning set '" + s + "'");
  }
  const auto coord = as_string(need(j, "coordinate", field), field + ".coordinate");
  const double lo = j.contains("lo") ? as_number(j["lo"], field + ".lo") : -HUGE_VAL;
  const double hi = j.contains("hi") ? as_number(j["hi"], field + ".hi") : HUGE_VAL;
  if (lo > hi) fail(field, "lo exceeds hi");
  return ConditioningSet::range(coord, lo, hi);
}

KernelConfig kernel_config_from_json(const json& j, const std::string& field) {
  KernelConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) fail(field, "expected an object");
  if (j.contains("family")) {
    const auto s = as_string(j["family"], field + ".family");
    cfg.family = guarded(field + ".family", [&] { return kernel_family_from_string(s); });
  }
  if (j.contains("bandwidth")) {
    cfg.bandwidth = as_number(j["bandwidth"], field + ".bandwidth");
    if (!(cfg.bandwidth > 0.0)) fail(field + ".bandwidth", "must be positive");
  }
  if (j.contains("grid")) {
    cfg.grid = as_vector(j["grid"], field + ".grid");
    if (cfg.grid.empty()) fail(field + ".grid", "grid is empty");
    for (double h : cfg.grid) {
      if (!(h > 0.0)) fail(field + ".grid", "bandwidths must be positive");
    }
  }
  if (j.contains("discrete")) cfg.discrete = as_strings(j["discrete"], field + ".discrete");
  if (j.contains("columns")) cfg.columns = as_strings(j["columns"], field + ".columns");
  return cfg;
}

}  // namespace gamecf
