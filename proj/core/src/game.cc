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

#include "gamecf/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <utility>

#include "gamecf/error.hpp"

namespace gamecf {
namespace {

bool values_match(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > kStateMatchTolerance) return false;
  }
  return true;
}

std::string key_of(std::span<const double> values) {
  std::string key(values.size() * sizeof(double), '\0');
  std::memcpy(key.data(), values.data(), key.size());
  return key;
}

void check_distribution(const std::vector<GridPoint>& grid,
                        const std::string& name, bool strictly_positive) {
  if (grid.empty()) throw InvalidArgument(name + ": grid is empty");
  double total = 0.0;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const double wgt = grid[r].weight;
    if (!std::isfinite(wgt) || wgt < 0.0 ||
        (strictly_positive && wgt <= 0.0)) {
      throw InvalidArgument(name + ": row " + std::to_string(r) +
                            " has invalid weight " + std::to_string(wgt));
    }
    total += wgt;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", total);
    throw InvalidArgument(name + ": weights sum to " + buf + ", expected 1");
  }
}

}  // namespace

// --------------------------------------------------------------------------
// StateLayout

StateLayout::StateLayout(std::vector<Coordinate> coordinates)
    : coordinates_(std::move(coordinates)) {
  std::set<std::string> seen;
  for (const auto& c : coordinates_) {
    if (c.name.empty()) throw InvalidArgument("coordinate name is empty");
    if (!seen.insert(c.name).second) {
      throw InvalidArgument("duplicate coordinate name '" + c.name + "'");
    }
    if (c.visibility == Visibility::kPrivate && c.owner < 0) {
      throw InvalidArgument("private coordinate '" + c.name +
                            "' needs an owner");
    }
  }
}

std::optional<int> StateLayout::find(std::string_view name) const {
  for (int k = 0; k < size(); ++k) {
    if (coordinates_[k].name == name) return k;
  }
  return std::nullopt;
}

int StateLayout::index_of(std::string_view name) const {
  auto k = find(name);
  if (!k) throw InvalidArgument("unknown coordinate '" + std::string(name) + "'");
  return *k;
}

std::vector<int> StateLayout::observed_indices() const {
  std::vector<int> out;
  for (int k = 0; k < size(); ++k) {
    if (coordinates_[k].observed) out.push_back(k);
  }
  return out;
}

// --------------------------------------------------------------------------
// ProfileSpace

ProfileSpace::ProfileSpace(std::vector<int> action_counts)
    : counts_(std::move(action_counts)), strides_(counts_.size()) {
  if (counts_.empty()) throw InvalidArgument("a game needs at least one player");
  long long stride = 1;
  for (int i = static_cast<int>(counts_.size()) - 1; i >= 0; --i) {
    if (counts_[i] < 1) throw InvalidArgument("every player needs an action");
    strides_[i] = static_cast<int>(stride);
    stride *= counts_[i];
    if (stride > (1LL << 24)) throw InvalidArgument("profile space too large");
  }
  size_ = static_cast<int>(stride);
}

std::vector<int> ProfileSpace::decode(int profile) const {
  std::vector<int> out(counts_.size());
  for (int i = 0; i < num_players(); ++i) out[i] = action_of(profile, i);
  return out;
}

int ProfileSpace::encode(std::span<const int> actions) const {
  if (static_cast<int>(actions.size()) != num_players()) {
    throw InvalidArgument("profile length does not match player count");
  }
  int p = 0;
  for (int i = 0; i < num_players(); ++i) {
    if (actions[i] < 0 || actions[i] >= counts_[i]) {
      throw InvalidArgument("action index out of range");
    }
    p += actions[i] * strides_[i];
  }
  return p;
}

// --------------------------------------------------------------------------
// FiniteGame

FiniteGame FiniteGame::Create(GameSpec spec) {
  FiniteGame g;
  if (spec.actions.empty()) throw InvalidArgument("a game needs players");
  std::vector<int> counts;
  for (const auto& a : spec.actions) {
    if (a.empty()) throw InvalidArgument("every player needs an action");
    counts.push_back(static_cast<int>(a.size()));
  }
  g.profiles_ = ProfileSpace(counts);
  g.actions_ = std::move(spec.actions);
  g.layout_ = std::move(spec.layout);
  for (const auto& c : g.layout_.coordinates()) {
    if (c.owner >= g.num_players()) {
      throw InvalidArgument("coordinate '" + c.name + "' owned by unknown player");
    }
  }
  check_distribution(spec.states, "state grid", false);
  const int dim = g.layout_.size();
  for (const auto& s : spec.states) {
    if (static_cast<int>(s.values.size()) != dim) {
      throw InvalidArgument("state row has " + std::to_string(s.values.size()) +
                            " values, layout has " + std::to_string(dim));
    }
    for (double v : s.values) {
      if (!std::isfinite(v)) throw InvalidArgument("state value is not finite");
    }
    g.states_.insert(g.states_.end(), s.values.begin(), s.values.end());
    g.weights_.push_back(s.weight);
  }
  g.off_support_.assign(g.weights_.size(), false);
  if (!spec.payoff) throw InvalidArgument("payoff function missing");
  g.payoff_fn_ = std::make_shared<const PayoffFn>(std::move(spec.payoff));
  g.info_kind_ = spec.info_kind;
  if (g.info_kind_ == InfoKind::kCustom) {
    if (!spec.custom_information) {
      throw InvalidArgument("custom information requires an explicit kernel");
    }
    g.information_ = std::move(*spec.custom_information);
  } else if (spec.custom_information) {
    throw InvalidArgument("explicit kernel given for a non-custom game");
  }
  g.materialize();
  return g;
}

void FiniteGame::materialize() {
  const int n = num_players();
  const int ns = num_states();
  const int np = profiles_.size();

  payoffs_.assign(static_cast<std::size_t>(ns) * np * n, 0.0);
  std::vector<int> prof(n);
  for (int w = 0; w < ns; ++w) {
    auto s = state(w);
    for (int p = 0; p < np; ++p) {
      for (int i = 0; i < n; ++i) prof[i] = profiles_.action_of(p, i);
      for (int i = 0; i < n; ++i) {
        const double u = (*payoff_fn_)(i, prof, s);
        if (!std::isfinite(u)) {
          throw InvalidArgument("payoff is not finite at state " +
                                std::to_string(w));
        }
        payoffs_[(static_cast<std::size_t>(w) * np + p) * n + i] = u;
      }
    }
  }

  switch (info_kind_) {
    case InfoKind::kComplete: {
      information_.signal_counts.assign(n, ns);
      information_.rows.assign(ns, {});
      for (int w = 0; w < ns; ++w) {
        information_.rows[w].push_back({std::vector<int>(n, w), 1.0});
      }
      break;
    }
    case InfoKind::kPublicPrivate: {
      information_.signal_counts.assign(n, 0);
      information_.rows.assign(ns, {SignalDraw{std::vector<int>(n), 1.0}});
      for (int i = 0; i < n; ++i) {
        std::vector<int> visible;
        for (int k = 0; k < layout_.size(); ++k) {
          const auto& c = layout_[k];
          if (c.visibility == Visibility::kCommon || c.owner == i) {
            visible.push_back(k);
          }
        }
        std::map<std::vector<double>, int> labels;
        for (int w = 0; w < ns; ++w) {
          std::vector<double> key;
          for (int k : visible) key.push_back(state(w)[k]);
          auto [it, inserted] =
              labels.emplace(std::move(key), static_cast<int>(labels.size()));
          information_.rows[w][0].profile[i] = it->second;
        }
        information_.signal_counts[i] = static_cast<int>(labels.size());
      }
      break;
    }
    case InfoKind::kCustom: {
      if (static_cast<int>(information_.signal_counts.size()) != n) {
        throw InvalidArgument("kernel needs one signal count per player");
      }
      if (static_cast<int>(information_.rows.size()) != ns) {
        throw InvalidArgument("kernel needs one row per state");
      }
      for (int w = 0; w < ns; ++w) {
        double total = 0.0;
        for (const auto& d : information_.rows[w]) {
          if (static_cast<int>(d.profile.size()) != n) {
            throw InvalidArgument("signal profile length mismatch");
          }
          for (int i = 0; i < n; ++i) {
            if (d.profile[i] < 0 || d.profile[i] >= information_.signal_counts[i]) {
              throw InvalidArgument("signal index out of range");
            }
          }
          if (!(d.prob >= 0.0)) throw InvalidArgument("negative kernel entry");
          total += d.prob;
        }
        if (std::abs(total - 1.0) > kProbabilityTolerance) {
          throw InvalidArgument("kernel row " + std::to_string(w) +
                                " does not sum to 1");
        }
      }
      break;
    }
  }
}

std::vector<double> FiniteGame::profile_values(int profile) const {
  std::vector<double> out(num_players());
  for (int i = 0; i < num_players(); ++i) {
    out[i] = actions_[i][profiles_.action_of(profile, i)];
  }
  return out;
}

bool FiniteGame::coordinate_common(int k) const {
  switch (info_kind_) {
    case InfoKind::kComplete:
      return true;
    case InfoKind::kPublicPrivate:
      return layout_[k].visibility == Visibility::kCommon;
    case InfoKind::kCustom:
      break;
  }
  // Each player's signal must pin the coordinate down exactly.
  for (int i = 0; i < num_players(); ++i) {
    std::vector<std::optional<double>> pinned(information_.signal_counts[i]);
    for (int w = 0; w < num_states(); ++w) {
      const double v = state(w)[k];
      for (const auto& d : information_.rows[w]) {
        if (d.prob <= 0.0) continue;
        auto& slot = pinned[d.profile[i]];
        if (!slot) {
          slot = v;
        } else if (std::abs(*slot - v) > kStateMatchTolerance) {
          return false;
        }
      }
    }
  }
  return true;
}

std::optional<int> FiniteGame::find_state(std::span<const double> values) const {
  for (int w = 0; w < num_states(); ++w) {
    if (values_match(state(w), values)) return w;
  }
  return std::nullopt;
}

FiniteGame FiniteGame::with_states(std::vector<GridPoint> states,
                                   std::vector<bool> off_support,
                                   Regime regime) const {
  if (off_support.size() != states.size()) {
    throw InvalidArgument("off-support flags do not match the state grid");
  }
  if (info_kind_ == InfoKind::kCustom) {
    bool same = static_cast<int>(states.size()) == num_states();
    for (int w = 0; same && w < num_states(); ++w) {
      same = values_match(state(w), states[w].values);
    }
    if (!same) {
      throw InvalidArgument(
          "an explicit signal kernel cannot be extended to new states");
    }
  }
  FiniteGame g;
  g.actions_ = actions_;
  g.profiles_ = profiles_;
  g.layout_ = layout_;
  check_distribution(states, "state grid", false);
  for (const auto& s : states) {
    if (static_cast<int>(s.values.size()) != layout_.size()) {
      throw InvalidArgument("state row length does not match layout");
    }
    g.states_.insert(g.states_.end(), s.values.begin(), s.values.end());
    g.weights_.push_back(s.weight);
  }
  g.off_support_ = std::move(off_support);
  g.payoff_fn_ = payoff_fn_;
  g.info_kind_ = info_kind_;
  if (info_kind_ == InfoKind::kCustom) g.information_ = information_;
  g.regime_ = regime;
  g.materialize();
  return g;
}

FiniteGame FiniteGame::with_information(InformationStructure information) const {
  FiniteGame g = *this;
  g.info_kind_ = InfoKind::kCustom;
  g.information_ = std::move(information);
  g.materialize();
  return g;
}

FiniteGame FiniteGame::state_slice(int w) const {
  if (w < 0 || w >= num_states()) {
    throw InvalidArgument("state index " + std::to_string(w) + " out of range");
  }
  FiniteGame g;
  g.actions_ = actions_;
  g.profiles_ = profiles_;
  g.layout_ = layout_;
  auto s = state(w);
  g.states_.assign(s.begin(), s.end());
  g.weights_ = {1.0};
  g.off_support_ = {off_support_[w]};
  g.payoff_fn_ = payoff_fn_;
  g.info_kind_ = info_kind_;
  g.regime_ = regime_;
  const int np = profiles_.size();
  const int n = num_players();
  const auto first = payoffs_.begin() + static_cast<std::ptrdiff_t>(w) * np * n;
  g.payoffs_.assign(first, first + static_cast<std::ptrdiff_t>(np) * n);
  if (info_kind_ == InfoKind::kComplete) {
    g.information_.signal_counts.assign(n, 1);
    g.information_.rows = {{SignalDraw{std::vector<int>(n, 0), 1.0}}};
  } else {
    g.information_.signal_counts = information_.signal_counts;
    g.information_.rows = {information_.rows[w]};
  }
  return g;
}

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t k = 0; k < n; ++k) {
      h ^= c[k];
      h *= 0x100000001b3ULL;
    }
  }
  void f64(double v) { bytes(&v, sizeof v); }
  void i64(std::int64_t v) { bytes(&v, sizeof v); }
  void str(const std::string& s) {
    i64(static_cast<std::int64_t>(s.size()));
    bytes(s.data(), s.size());
  }
};

}  // namespace

std::uint64_t game_hash(const FiniteGame& game) {
  Fnv1a f;
  const int n = game.num_players();
  f.i64(n);
  for (int i = 0; i < n; ++i) {
    f.i64(static_cast<std::int64_t>(game.actions(i).size()));
    for (double a : game.actions(i)) f.f64(a);
  }
  for (const auto& c : game.layout().coordinates()) {
    f.str(c.name);
    f.i64(c.owner);
    f.i64(c.observed);
    f.i64(c.visibility == Visibility::kCommon);
  }
  f.i64(static_cast<std::int64_t>(game.info_kind()));
  for (int w = 0; w < game.num_states(); ++w) {
    for (double v : game.state(w)) f.f64(v);
    f.f64(game.weight(w));
    for (int p = 0; p < game.profiles().size(); ++p) {
      for (int i = 0; i < n; ++i) f.f64(game.payoff(i, p, w));
    }
    for (const auto& d : game.information().rows[w]) {
      for (int t : d.profile) f.i64(t);
      f.f64(d.prob);
    }
  }
  return f.h;
}

// --------------------------------------------------------------------------
// Constructors

std::string default_covariate_name(int owner, int k) {
  return "x_" + std::to_string(owner + 1) + "_" + std::to_string(k);
}

namespace {

std::vector<Coordinate> entry_layout(int players,
                                     std::vector<Coordinate> x_columns,
                                     std::size_t x_dim) {
  if (x_columns.empty()) x_columns.resize(x_dim);
  if (x_columns.size() != x_dim) {
    throw InvalidArgument("covariate metadata does not match covariate grid");
  }
  std::map<int, int> per_owner;
  for (auto& c : x_columns) {
    const int k = ++per_owner[c.owner];
    if (c.name.empty()) c.name = default_covariate_name(c.owner, k);
  }
  for (auto& c : x_columns) {
    c.observed = true;
    c.visibility = Visibility::kCommon;
  }
  for (int i = 0; i < players; ++i) {
    x_columns.push_back({"eps_" + std::to_string(i + 1), i, false,
                         Visibility::kPrivate});
  }
  return x_columns;
}

PayoffFn entry_payoff(int players, double delta,
                      std::vector<std::vector<double>> beta) {
  return [players, delta, beta = std::move(beta)](
             int i, std::span<const int> y, std::span<const double> w) {
    if (y[i] == 0) return 0.0;
    int others = 0;
    for (int j = 0; j < players; ++j) {
      if (j != i) others += y[j];
    }
    const auto& b = beta[i];
    double index = w[b.size() + i];
    for (std::size_t k = 0; k < b.size(); ++k) index += w[k] * b[k];
    return delta * others + index;
  };
}

void check_entry_args(int players, double delta,
                      const std::vector<std::vector<double>>& beta,
                      std::size_t x_dim, InfoKind info) {
  if (players < 1) throw InvalidArgument("entry game needs at least one player");
  if (!std::isfinite(delta)) throw InvalidArgument("delta must be finite");
  if (static_cast<int>(beta.size()) != players) {
    throw InvalidArgument("need one coefficient vector per player");
  }
  for (int i = 0; i < players; ++i) {
    if (beta[i].size() != x_dim) {
      throw InvalidArgument("player " + std::to_string(i + 1) + " has " +
                            std::to_string(beta[i].size()) +
                            " coefficients, covariate grid has " +
                            std::to_string(x_dim) + " columns");
    }
  }
  if (info == InfoKind::kCustom) {
    throw InvalidArgument("entry games use complete or public/private information");
  }
}

}  // namespace

FiniteGame build_entry_game(const EntryGameParams& params) {
  check_distribution(params.x_grid, "x_grid", true);
  check_distribution(params.eps_grid, "eps_grid", true);
  const std::size_t x_dim = params.x_grid.front().values.size();
  for (const auto& r : params.x_grid) {
    if (r.values.size() != x_dim) throw InvalidArgument("x_grid rows are ragged");
  }
  for (const auto& r : params.eps_grid) {
    if (static_cast<int>(r.values.size()) != params.players) {
      throw InvalidArgument("eps_grid rows need one shock per player");
    }
  }
  check_entry_args(params.players, params.delta, params.beta, x_dim,
                   params.info);
  std::vector<GridPoint> joint;
  joint.reserve(params.x_grid.size() * params.eps_grid.size());
  for (const auto& x : params.x_grid) {
    for (const auto& e : params.eps_grid) {
      GridPoint p;
      p.values = x.values;
      p.values.insert(p.values.end(), e.values.begin(), e.values.end());
      p.weight = x.weight * e.weight;
      joint.push_back(std::move(p));
    }
  }
  // Product weights can drift from 1 by a few ulps.
  double total = 0.0;
  for (const auto& p : joint) total += p.weight;
  for (auto& p : joint) p.weight /= total;
  return build_entry_game_joint(params.players, params.delta, params.beta,
                                params.x_columns, joint, params.info);
}

FiniteGame build_entry_game_joint(int players, double delta,
                                  const std::vector<std::vector<double>>& beta,
                                  std::vector<Coordinate> x_columns,
                                  const std::vector<GridPoint>& joint_grid,
                                  InfoKind info) {
  check_distribution(joint_grid, "state grid", false);
  const std::size_t width = joint_grid.front().values.size();
  if (width < static_cast<std::size_t>(players)) {
    throw InvalidArgument("state rows need one shock per player");
  }
  const std::size_t x_dim = width - players;
  check_entry_args(players, delta, beta, x_dim, info);
  GameSpec spec;
  spec.actions.assign(players, {0.0, 1.0});
  spec.layout = StateLayout(entry_layout(players, std::move(x_columns), x_dim));
  spec.states = joint_grid;
  spec.payoff = entry_payoff(players, delta, beta);
  spec.info_kind = info;
  return FiniteGame::Create(std::move(spec));
}

FiniteGame build_second_price_auction(int bidders,
                                      const std::vector<GridPoint>& value_grid,
                                      const std::vector<GridPoint>& reserve_grid) {
  if (bidders < 1) throw InvalidArgument("auction needs at least one bidder");
  if (value_grid.empty()) throw InvalidArgument("value grid is empty");
  if (reserve_grid.empty()) throw InvalidArgument("reserve grid is empty");
  check_distribution(value_grid, "value_grid", true);
  check_distribution(reserve_grid, "reserve_grid", true);
  std::vector<double> levels{0.0};
  for (const auto& v : value_grid) {
    if (v.values.size() != 1) throw InvalidArgument("values are scalars");
    if (v.values[0] < 0.0) throw InvalidArgument("values must be non-negative");
    levels.push_back(v.values[0]);
  }
  for (const auto& r : reserve_grid) {
    if (r.values.size() != 1) throw InvalidArgument("reserve prices are scalars");
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<Coordinate> coords{{"reserve", -1, true, Visibility::kCommon}};
  for (int i = 0; i < bidders; ++i) {
    coords.push_back({"v_" + std::to_string(i + 1), i, false,
                      Visibility::kPrivate});
  }

  std::vector<GridPoint> states;
  for (const auto& r : reserve_grid) {
    std::vector<int> digit(bidders, 0);
    while (true) {
      GridPoint p{{r.values[0]}, r.weight};
      for (int i = 0; i < bidders; ++i) {
        p.values.push_back(value_grid[digit[i]].values[0]);
        p.weight *= value_grid[digit[i]].weight;
      }
      states.push_back(std::move(p));
      int i = bidders - 1;
      while (i >= 0 && ++digit[i] == static_cast<int>(value_grid.size())) {
        digit[i--] = 0;
      }
      if (i < 0) break;
    }
  }
  double total = 0.0;
  for (const auto& p : states) total += p.weight;
  for (auto& p : states) p.weight /= total;

  GameSpec spec;
  spec.actions.assign(bidders, levels);
  spec.layout = StateLayout(std::move(coords));
  spec.states = std::move(states);
  spec.info_kind = InfoKind::kPublicPrivate;
  spec.payoff = [levels, bidders](int i, std::span<const int> y,
                                  std::span<const double> w) {
    const double reserve = w[0];
    auto qualifies = [&](double b) { return b > 0.0 && b >= reserve; };
    const double mine = levels[y[i]];
    if (!qualifies(mine)) return 0.0;
    int tied = 0;
    double second = -1.0;
    for (int j = 0; j < bidders; ++j) {
      const double b = levels[y[j]];
      if (!qualifies(b)) continue;
      if (b > mine) return 0.0;
      if (b == mine) {
        ++tied;
        if (j != i) second = b;
      } else {
        second = std::max(second, b);
      }
    }
    const double price = second < 0.0 ? reserve : second;
    return (w[1 + i] - price) / tied;
  };
  return FiniteGame::Create(std::move(spec));
}

// --------------------------------------------------------------------------
// Policy

Policy Policy::set_constant(std::string coordinate, double value) {
  Policy p;
  p.steps_.push_back({Kind::kSetConstant, {std::move(coordinate)}, value, {}});
  return p;
}

Policy Policy::additive_shift(std::string coordinate, double amount) {
  Policy p;
  p.steps_.push_back({Kind::kAdditiveShift, {std::move(coordinate)}, amount, {}});
  return p;
}

Policy Policy::table(std::vector<std::string> coordinates,
                     std::vector<TableEntry> entries) {
  if (coordinates.empty()) throw InvalidArgument("table policy needs coordinates");
  for (const auto& e : entries) {
    if (e.from.size() != coordinates.size() || e.to.size() != coordinates.size()) {
      throw InvalidArgument("table entry width does not match coordinates");
    }
  }
  Policy p;
  p.steps_.push_back({Kind::kTable, std::move(coordinates), 0.0, std::move(entries)});
  return p;
}

Policy Policy::then(const Policy& next) const {
  Policy p = *this;
  p.steps_.insert(p.steps_.end(), next.steps_.begin(), next.steps_.end());
  return p;
}

std::vector<std::string> Policy::targets() const {
  std::vector<std::string> out;
  for (const auto& s : steps_) {
    for (const auto& c : s.coordinates) {
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  }
  return out;
}

std::vector<double> Policy::apply(const StateLayout& layout,
                                  std::span<const double> state) const {
  std::vector<double> v(state.begin(), state.end());
  for (const auto& s : steps_) {
    std::vector<int> idx;
    for (const auto& c : s.coordinates) idx.push_back(layout.index_of(c));
    switch (s.kind) {
      case Kind::kSetConstant:
        v[idx[0]] = s.value;
        break;
      case Kind::kAdditiveShift:
        v[idx[0]] += s.value;
        break;
      case Kind::kTable:
        for (const auto& e : s.table) {
          bool hit = true;
          for (std::size_t k = 0; k < idx.size() && hit; ++k) {
            hit = std::abs(v[idx[k]] - e.from[k]) <= kStateMatchTolerance;
          }
          if (hit) {
            for (std::size_t k = 0; k < idx.size(); ++k) v[idx[k]] = e.to[k];
            break;
          }
        }
        break;
    }
  }
  return v;
}

PolicyImage policy_image(const FiniteGame& game, const Policy& policy) {
  const int ns = game.num_states();
  std::vector<GridPoint> post(ns);
  std::unordered_map<std::string, int> exact;
  for (int w = 0; w < ns; ++w) {
    auto s = game.state(w);
    post[w].values.assign(s.begin(), s.end());
    exact.emplace(key_of(s), w);
  }
  std::vector<int> image(ns);
  for (int w = 0; w < ns; ++w) {
    auto v = policy.apply(game.layout(), game.state(w));
    int target = -1;
    if (auto it = exact.find(key_of(v)); it != exact.end()) {
      target = it->second;
    } else {
      for (int u = 0; u < static_cast<int>(post.size()); ++u) {
        if (values_match(post[u].values, v)) {
          target = u;
          break;
        }
      }
    }
    if (target < 0) {
      target = static_cast<int>(post.size());
      exact.emplace(key_of(v), target);
      post.push_back({std::move(v), 0.0});
    }
    image[w] = target;
  }
  // Accumulate in pre-state order so identical inputs give identical sums.
  for (int w = 0; w < ns; ++w) post[image[w]].weight += game.weight(w);
  std::vector<bool> off(post.size());
  for (std::size_t u = 0; u < post.size(); ++u) {
    off[u] = static_cast<int>(u) >= ns || game.weight(static_cast<int>(u)) <= 0.0;
  }
  return {game.with_states(std::move(post), std::move(off), Regime::kPost),
          std::move(image)};
}

FiniteGame apply_policy(const FiniteGame& game, const Policy& policy) {
  auto report = check_policy_admissible(game, policy);
  if (!report.holds) {
    std::string msg = "policy is not admissible:";
    for (const auto& r : report.reasons) msg += " " + r + ";";
    throw Error("policy_not_admissible", msg);
  }
  return policy_image(game, policy).game;
}

AdmissibilityReport check_policy_admissible(const FiniteGame& game,
                                            const Policy& policy) {
  AdmissibilityReport report;
  for (const auto& name : policy.targets()) {
    auto k = game.layout().find(name);
    if (!k) {
      report.holds = false;
      report.reasons.push_back("'" + name + "' is not a state coordinate");
      continue;
    }
    const auto& c = game.layout()[*k];
    if (!c.observed) {
      report.holds = false;
      report.reasons.push_back("'" + name + "' is unobserved");
    }
    if (c.visibility == Visibility::kPrivate) {
      report.holds = false;
      report.reasons.push_back("'" + name + "' is a private component");
    }
    if (c.visibility == Visibility::kCommon && !game.coordinate_common(*k)) {
      report.holds = false;
      report.reasons.push_back("some player's signal does not reveal '" + name +
                               "'");
    }
  }
  return report;
}

}  // namespace gamecf
