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

#include "gamecf/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gamecf/error.hpp"

namespace gamecf {

double ObservedView::operator[](std::string_view name) const {
  const int k = layout_.index_of(name);
  if (!layout_[k].observed) {
    throw InvalidArgument("conditioning on unobserved coordinate '" + std::string(name) + "'");
  }
  return state_[k];
}

ConditioningSet ConditioningSet::all() {
  return {"all", [](const ObservedView&) { return true; }};
}

ConditioningSet ConditioningSet::none() {
  return {"none", [](const ObservedView&) { return false; }};
}

ConditioningSet ConditioningSet::range(std::string coordinate, double lo, double hi) {
  if (!(lo <= hi)) throw InvalidArgument("empty conditioning range");
  std::string desc = coordinate + " in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  return {desc, [coordinate, lo, hi](const ObservedView& v) {
            const double x = v[coordinate];
            return x >= lo && x <= hi;
          }};
}

bool ConditioningSet::operator()(const StateLayout& layout,
                                 std::span<const double> state) const {
  return !contains || contains(ObservedView(layout, state));
}

void validate(const OutcomeFunctional& h, const FiniteGame& game) {
  if (!h.h) throw InvalidArgument("functional '" + h.label + "' has no map");
  for (int w = 0; w < game.num_states(); ++w) {
    const auto s = game.state(w);
    const double lo = h.lower_at(s);
    const double hi = h.upper_at(s);
    if (!(lo <= hi)) throw InvalidArgument("functional '" + h.label + "' has lower > upper");
    for (int p = 0; p < game.profiles().size(); ++p) {
      const double v = h(game.profile_values(p), s);
      if (!std::isfinite(v) || v < lo - 1e-12 || v > hi + 1e-12) {
        throw InvalidArgument("functional '" + h.label + "' leaves its bounds at state " +
                              std::to_string(w) + ", profile " + std::to_string(p));
      }
    }
  }
}

OutcomeFunctional make_expected_action(const FiniteGame& game, int player) {
  if (player < 0 || player >= game.num_players()) {
    throw InvalidArgument("player index out of range");
  }
  const auto& a = game.actions(player);
  OutcomeFunctional f;
  f.label = "expected_action(" + std::to_string(player + 1) + ")";
  f.h = [player](std::span<const double> y, std::span<const double>) { return y[player]; };
  f.h_lower = *std::min_element(a.begin(), a.end());
  f.h_upper = *std::max_element(a.begin(), a.end());
  return f;
}

OutcomeFunctional make_cdf(std::vector<double> t) {
  if (t.empty()) throw InvalidArgument("cdf needs one threshold per player");
  OutcomeFunctional f;
  f.label = "cdf";
  f.h = [t = std::move(t)](std::span<const double> y, std::span<const double>) {
    if (y.size() != t.size()) throw InvalidArgument("cdf threshold count mismatch");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (y[i] > t[i]) return 0.0;
    }
    return 1.0;
  };
  return f;
}

OutcomeFunctional make_max_cdf(double t, std::vector<int> players, int num_players) {
  if (players.empty()) throw InvalidArgument("max_cdf needs a non-empty player set");
  std::sort(players.begin(), players.end());
  for (std::size_t k = 0; k < players.size(); ++k) {
    if (players[k] < 0 || players[k] >= num_players) {
      throw InvalidArgument("max_cdf player index out of range");
    }
    if (k > 0 && players[k] == players[k - 1]) {
      throw InvalidArgument("max_cdf player set has duplicates");
    }
  }
  OutcomeFunctional f;
  f.label = "max_cdf";
  f.h = [t, players = std::move(players)](std::span<const double> y, std::span<const double>) {
    for (int i : players) {
      if (y[i] > t) return 0.0;
    }
    return 1.0;
  };
  return f;
}

OutcomeFunctional make_quadratic_loss(const FiniteGame& game, int player, double target) {
  if (player < 0 || player >= game.num_players()) {
    throw InvalidArgument("player index out of range");
  }
  double worst = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double a : game.actions(player)) {
    const double d = (a - target) * (a - target);
    worst = std::max(worst, d);
    best = std::min(best, d);
  }
  OutcomeFunctional f;
  f.label = "quadratic_loss(" + std::to_string(player + 1) + ")";
  f.h = [player, target](std::span<const double> y, std::span<const double>) {
    const double d = y[player] - target;
    return -d * d;
  };
  f.h_lower = -worst;
  f.h_upper = -best;
  return f;
}

OutcomeFunctional make_revenue(const FiniteGame& game) {
  const int r = game.layout().index_of("reserve");
  double top = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    for (double a : game.actions(i)) top = std::max(top, a);
  }
  double reserve_top = 0.0;
  for (int w = 0; w < game.num_states(); ++w) reserve_top = std::max(reserve_top, game.state(w)[r]);
  OutcomeFunctional f;
  f.label = "revenue";
  f.h = [r](std::span<const double> y, std::span<const double> w) {
    const double reserve = w[r];
    double first = -1.0;
    double second = -1.0;
    int qualifying = 0;
    for (double b : y) {
      if (!(b > 0.0 && b >= reserve)) continue;
      ++qualifying;
      if (b > first) {
        second = first;
        first = b;
      } else if (b > second) {
        second = b;
      }
    }
    if (qualifying == 0) return 0.0;
    return qualifying == 1 ? reserve : second;
  };
  f.h_lower = 0.0;
  f.h_upper = std::max(top, reserve_top);
  return f;
}

}  // namespace gamecf
