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

#include "gamecf/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include "gamecf/error.hpp"

namespace gamecf {
namespace {

double expected_h(const FiniteGame& g, std::span<const double> rho, int w,
                  const OutcomeFunctional& h) {
  double s = 0.0;
  const auto state = g.state(w);
  for (int y = 0; y < g.profiles().size(); ++y) {
    if (rho[y] == 0.0) continue;
    s += rho[y] * h(g.profile_values(y), state);
  }
  return s;
}

void require_pre(const ReducedForm& pre, const FiniteGame& game) {
  if (pre.num_states() != game.num_states() ||
      pre.num_profiles() != game.profiles().size()) {
    throw InvalidArgument("reduced form does not belong to the pre-policy game");
  }
}

bool in_support(const FiniteGame& game, int v) {
  return v < game.num_states() && game.weight(v) > 0.0;
}

void require_admissible(const FiniteGame& game, const Policy& policy) {
  const auto report = check_policy_admissible(game, policy);
  if (report.holds) return;
  std::string msg = "policy is not admissible:";
  for (const auto& r : report.reasons) msg += " " + r + ";";
  throw Error("policy_not_admissible", msg);
}

}  // namespace

double ep(const FiniteGame& game, const Policy& policy, const SelectionRule& post_rule,
          EqSolver solver, const OutcomeFunctional& h, const ConditioningSet& C) {
  const auto img = policy_image(game, policy);
  const auto& post = img.game;
  const auto rho = reduced_form(post, post_rule, solver);
  double total = 0.0;
  for (int u = 0; u < post.num_states(); ++u) {
    if (post.weight(u) <= 0.0 || !C(post.layout(), post.state(u))) continue;
    total += post.weight(u) * expected_h(post, rho.slice(u), u, h);
  }
  return total;
}

double dp(const ReducedForm& pre, const FiniteGame& game, const Policy& policy,
          const OutcomeFunctional& h, const ConditioningSet& C) {
  require_pre(pre, game);
  const auto img = policy_image(game, policy);
  double total = 0.0;
  for (int w = 0; w < game.num_states(); ++w) {
    if (game.weight(w) <= 0.0) continue;
    const int v = img.image[w];
    if (!in_support(game, v) || !C(game.layout(), game.state(v))) continue;
    total += game.weight(w) * expected_h(game, pre.slice(v), v, h);
  }
  return total;
}

double error_bound(const FiniteGame& game, const Policy& policy, const ConditioningSet& C) {
  const auto img = policy_image(game, policy);
  double total = 0.0;
  for (int w = 0; w < game.num_states(); ++w) {
    if (game.weight(w) <= 0.0) continue;
    const int v = img.image[w];
    if (in_support(game, v) || !C(img.game.layout(), img.game.state(v))) continue;
    total += game.weight(w);
  }
  return total;
}

PredictionBound bounds(const ReducedForm& pre, const FiniteGame& game, const Policy& policy,
                       const OutcomeFunctional& h, const ConditioningSet& C,
                       bool invariance_checked) {
  require_pre(pre, game);
  require_admissible(game, policy);
  validate(h, game);
  const auto img = policy_image(game, policy);
  PredictionBound b;
  b.target = h.label;
  b.conditioning = C.description;
  b.invariance_checked = invariance_checked;
  b.dp = dp(pre, game, policy, h, C);
  double lo = 0.0;
  double hi = 0.0;
  for (int w = 0; w < game.num_states(); ++w) {
    if (game.weight(w) <= 0.0) continue;
    const int v = img.image[w];
    const auto s = img.game.state(v);
    if (in_support(game, v) || !C(img.game.layout(), s)) continue;
    b.eb += game.weight(w);
    lo += game.weight(w) * h.lower_at(s);
    hi += game.weight(w) * h.upper_at(s);
  }
  b.lower = b.dp + lo;
  b.upper = b.dp + hi;
  return b;
}

EffectBounds average_effect(const ReducedForm& pre, const FiniteGame& game,
                            const Policy& policy, int player) {
  require_pre(pre, game);
  require_admissible(game, policy);
  const auto h = make_expected_action(game, player);
  EffectBounds e;
  e.adp = dp(pre, game, policy, h);
  e.eb = error_bound(game, policy);
  for (int w = 0; w < game.num_states(); ++w) {
    if (game.weight(w) <= 0.0) continue;
    e.mean += game.weight(w) * expected_h(game, pre.slice(w), w, h);
  }
  const double base = e.adp - e.mean;
  e.lower = base + h.h_lower * e.eb;
  e.upper = base + h.h_upper * e.eb;
  return e;
}

SharpnessConstruction sharpness_game(const FiniteGame& game, const Policy& policy,
                                     const OutcomeFunctional& h, BoundSide side, double eps,
                                     const ConditioningSet& C) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  const auto img = policy_image(game, policy);
  const auto& post = img.game;
  auto pre_support = std::make_shared<std::set<std::string>>();
  auto post_support = std::make_shared<std::set<std::string>>();
  for (int w = 0; w < game.num_states(); ++w) {
    if (game.weight(w) > 0.0) pre_support->insert(state_key(game.state(w)));
  }
  bool overlap = false;
  for (int u = 0; u < post.num_states(); ++u) {
    if (post.weight(u) <= 0.0) continue;
    const auto key = state_key(post.state(u));
    overlap = overlap || pre_support->count(key) > 0;
    post_support->insert(key);
  }
  if (!overlap) {
    throw InvalidArgument("pre- and post-policy supports do not overlap");
  }

  const ProfileSpace ps = game.profiles();
  const auto actions = game.all_actions();
  auto values_of = [ps, actions](int p) {
    std::vector<double> v(ps.num_players());
    for (int i = 0; i < ps.num_players(); ++i) v[i] = actions[i][ps.action_of(p, i)];
    return v;
  };
  // Index of the first maximizer (or minimizer) of h(., s).
  auto extreme = [ps, values_of, h](std::span<const double> s, bool maximize) {
    int best = 0;
    double best_v = h(values_of(0), s);
    for (int p = 1; p < ps.size(); ++p) {
      const double v = h(values_of(p), s);
      if (maximize ? v > best_v : v < best_v) {
        best_v = v;
        best = p;
      }
    }
    return best;
  };
  auto target_profile = [=](std::span<const double> s) {
    const auto key = state_key(s);
    const bool in_f = post_support->count(key) > 0;
    const bool in_w = pre_support->count(key) > 0;
    const bool high = side == BoundSide::kUpper ? in_f : (in_f && in_w);
    return extreme(s, high);
  };

  GameSpec spec;
  spec.actions = actions;
  spec.layout = game.layout();
  for (int w = 0; w < game.num_states(); ++w) {
    auto s = game.state(w);
    spec.states.push_back({std::vector<double>(s.begin(), s.end()), game.weight(w)});
  }
  spec.info_kind = InfoKind::kComplete;
  spec.payoff = [ps, target_profile](int i, std::span<const int> a, std::span<const double> s) {
    return a[i] == ps.action_of(target_profile(s), i) ? 1.0 : 0.0;
  };

  SharpnessConstruction out{FiniteGame::Create(std::move(spec)), SelectionRule::first_listed(),
                            EqSolver::kPureNe, 0.0};
  for (int w = 0; w < game.num_states(); ++w) {
    if (game.weight(w) <= 0.0) continue;
    const int v = img.image[w];
    const auto s = post.state(v);
    if (in_support(game, v) || !C(post.layout(), s)) continue;
    const double attained = h(values_of(target_profile(s)), s);
    const double declared = side == BoundSide::kUpper ? h.upper_at(s) : h.lower_at(s);
    out.slack += game.weight(w) * std::abs(declared - attained);
  }
  if (out.slack > eps) {
    throw Error("bound_not_attainable",
                "declared bound of '" + h.label + "' exceeds the attainable extreme of h by " +
                    std::to_string(out.slack));
  }
  return out;
}

}  // namespace gamecf
