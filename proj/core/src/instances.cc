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

#include "gamecf/instances.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "gamecf/game_json.hpp"
#include "gamecf/rng.hpp"

namespace gamecf {
namespace {

constexpr double kLattice[] = {-1.0, -0.5, 0.0, 0.5, 1.0};

double pick(CounterRng& rng, std::span<const double> values) {
  return values[rng.below(values.size())];
}

// `rows` distinct lattice rows of width `dims` with positive weights.
std::vector<GridPoint> random_grid(CounterRng& rng, int rows, int dims,
                                   std::span<const double> lattice, double offset = 0.0) {
  std::set<std::vector<double>> seen;
  std::vector<GridPoint> grid;
  int attempts = 0;
  while (static_cast<int>(grid.size()) < rows && attempts++ < 1000) {
    std::vector<double> v(dims);
    for (double& x : v) x = pick(rng, lattice) + offset;
    if (!seen.insert(v).second) continue;
    grid.push_back({v, 0.2 + rng.uniform()});
  }
  double total = 0.0;
  for (const auto& p : grid) total += p.weight;
  for (auto& p : grid) p.weight /= total;
  return grid;
}

std::vector<std::vector<double>> random_beta(CounterRng& rng, int players, int dims) {
  static constexpr double coef[] = {-1.0, -0.5, 0.5, 1.0};
  std::vector<std::vector<double>> beta(players, std::vector<double>(dims));
  for (auto& b : beta) {
    for (double& v : b) v = pick(rng, coef);
  }
  return beta;
}

OutcomeFunctional random_functional(CounterRng& rng, const FiniteGame& game) {
  const int n = game.num_players();
  switch (rng.below(3)) {
    case 0:
      return make_expected_action(game, static_cast<int>(rng.below(n)));
    case 1: {
      std::vector<double> t(n);
      for (double& v : t) v = rng.below(2) == 0 ? 0.0 : 1.0;
      // A zero threshold keeps both 0 and 1 attainable.
      t[rng.below(n)] = 0.0;
      return make_cdf(t);
    }
    default: {
      std::vector<int> players(n);
      for (int i = 0; i < n; ++i) players[i] = i;
      return make_max_cdf(0.0, players, n);
    }
  }
}

Policy random_policy(CounterRng& rng, const StateLayout& layout, int x_dims) {
  static constexpr double targets[] = {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5};
  static constexpr double shifts[] = {-1.0, -0.5, 0.5, 1.0};
  const std::string c0 = layout[0].name;
  switch (rng.below(4)) {
    case 0:
      return Policy::set_constant(c0, pick(rng, targets));
    case 1:
      return Policy::additive_shift(c0, pick(rng, shifts));
    case 2:
      return Policy::table({c0}, {{{pick(rng, kLattice)}, {pick(rng, targets)}},
                                  {{pick(rng, kLattice)}, {pick(rng, targets)}}});
    default: {
      const std::string c1 = layout[x_dims > 1 ? 1 : 0].name;
      return Policy::additive_shift(c0, pick(rng, shifts))
          .then(Policy::set_constant(c1, pick(rng, kLattice)));
    }
  }
}

std::vector<GridPoint> product_grid(const std::vector<std::vector<double>>& axes,
                                    const std::vector<std::vector<double>>& weights) {
  std::vector<GridPoint> grid{{{}, 1.0}};
  for (std::size_t a = 0; a < axes.size(); ++a) {
    std::vector<GridPoint> next;
    for (const auto& g : grid) {
      for (std::size_t k = 0; k < axes[a].size(); ++k) {
        GridPoint p = g;
        p.values.push_back(axes[a][k]);
        p.weight *= weights[a][k];
        next.push_back(std::move(p));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

}  // namespace

nlohmann::json Instance::describe() const {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(game_hash(game)));
  return {{"family", family},
          {"seed", seed},
          {"index", index},
          {"game_hash", hash},
          {"policy", policy_to_json(policy)},
          {"selection", rule.describe()},
          {"solver", to_string(solver)},
          {"functional", h.label},
          {"conditioning", C.description}};
}

Instance random_instance(std::uint64_t seed, int index) {
  CounterRng rng(seed, static_cast<std::uint64_t>(index));
  EntryGameParams p;
  p.players = 2 + static_cast<int>(rng.below(2));
  const int dims = 1 + static_cast<int>(rng.below(2));
  static constexpr double deltas[] = {-1.5, -1.0, -0.5, 0.5};
  p.delta = pick(rng, deltas);
  p.beta = random_beta(rng, p.players, dims);
  p.x_columns.resize(dims);
  p.x_columns[0].owner = -1;
  if (dims > 1) p.x_columns[1].owner = 0;
  p.x_grid = random_grid(rng, 2 + static_cast<int>(rng.below(4)), dims, kLattice);
  p.eps_grid = random_grid(rng, 1 + static_cast<int>(rng.below(5)), p.players, kLattice);
  Instance inst{"random", seed, index, build_entry_game(p), {}, {}, EqSolver::kPureNe, {}, {}};
  inst.policy = random_policy(rng, inst.game.layout(), dims);
  inst.rule = SelectionRule::invariant_by_state(SelectionRule::Fallback::kHashed,
                                                mix64(seed) ^ static_cast<std::uint64_t>(index));
  inst.h = random_functional(rng, inst.game);
  inst.C = rng.below(4) == 0 ? ConditioningSet::range(inst.game.layout()[0].name, -0.5, 2.0)
                             : ConditioningSet::all();
  return inst;
}

Instance dummy_to_zero_instance(std::uint64_t seed, int index) {
  CounterRng rng(seed ^ 0x5eedULL, static_cast<std::uint64_t>(index));
  EntryGameParams p;
  p.players = 2 + static_cast<int>(rng.below(2));
  static constexpr double deltas[] = {-1.5, -1.0, -0.5, 0.5};
  p.delta = pick(rng, deltas);
  p.beta = random_beta(rng, p.players, 2);
  p.x_columns = {{"d", -1, true, Visibility::kCommon}, {"", -1, true, Visibility::kCommon}};
  const double x0 = pick(rng, kLattice);
  const double x1 = x0 + 0.5;
  p.x_grid = {{{0.0, x0}, 0.0}, {{0.0, x1}, 0.0}, {{1.0, x0}, 0.0}};
  if (rng.below(2) == 0) p.x_grid.push_back({{1.0, x1}, 0.0});
  double total = 0.0;
  for (auto& g : p.x_grid) total += (g.weight = 0.2 + rng.uniform());
  for (auto& g : p.x_grid) g.weight /= total;
  p.eps_grid = random_grid(rng, 1 + static_cast<int>(rng.below(5)), p.players, kLattice);
  Instance inst{"dummy_to_zero", seed, index, build_entry_game(p), {}, {}, EqSolver::kPureNe, {}, {}};
  inst.policy = Policy::set_constant("d", 0.0);
  inst.rule = SelectionRule::invariant_by_state(SelectionRule::Fallback::kHashed,
                                                mix64(seed) + static_cast<std::uint64_t>(index));
  inst.h = random_functional(rng, inst.game);
  inst.C = ConditioningSet::all();
  return inst;
}

Instance label_dependent_instance() {
  EntryGameParams p;
  p.players = 2;
  p.delta = -1.0;
  p.beta = {{0.0}, {0.0}};
  p.x_columns = {{"d", -1, true, Visibility::kCommon}};
  p.x_grid = {{{0.0}, 0.5}, {{1.0}, 0.5}};
  // (0.5, 0.5): two entry equilibria; (1.5, 1.5): both firms enter.
  p.eps_grid = {{{0.5, 0.5}, 0.7}, {{1.5, 1.5}, 0.3}};
  Instance inst{"label_dependent", 0, 0, build_entry_game(p), {}, {}, EqSolver::kPureNe, {}, {}};
  inst.policy = Policy::set_constant("d", 0.0);
  inst.rule = SelectionRule::label_dependent({1.0, 0.0}, {0.0, 1.0});
  inst.h = make_expected_action(inst.game, 0);
  inst.C = ConditioningSet::all();
  return inst;
}

FiniteGame random_dominant_game(std::uint64_t seed, int index) {
  CounterRng rng(seed ^ 0xd0a1ULL, static_cast<std::uint64_t>(index));
  EntryGameParams p;
  p.players = 2 + static_cast<int>(rng.below(2));
  p.delta = 0.0;
  p.beta = random_beta(rng, p.players, 1);
  p.x_grid = random_grid(rng, 2 + static_cast<int>(rng.below(4)), 1, kLattice);
  // Shocks off the quarter lattice keep every payoff away from zero.
  p.eps_grid = random_grid(rng, 1 + static_cast<int>(rng.below(5)), p.players, kLattice, 0.125);
  return build_entry_game(p);
}

FiniteGame random_public_private_game(std::uint64_t seed, int index) {
  CounterRng rng(seed ^ 0x9b11ULL, static_cast<std::uint64_t>(index));
  EntryGameParams p;
  p.players = 2;
  static constexpr double deltas[] = {-1.5, -1.0, -0.5};
  p.delta = pick(rng, deltas);
  p.beta = random_beta(rng, 2, 1);
  p.x_grid = random_grid(rng, 1 + static_cast<int>(rng.below(2)), 1, kLattice);
  static constexpr double shocks[] = {-0.25, 0.25, 0.75, 1.25};
  p.eps_grid = random_grid(rng, 2 + static_cast<int>(rng.below(3)), 2, shocks);
  p.info = InfoKind::kPublicPrivate;
  return build_entry_game(p);
}

FiniteGame estimation_game() {
  std::vector<double> x(8);
  for (int k = 0; k < 8; ++k) x[k] = k / 7.0;
  const std::vector<double> ux(8, 1.0 / 8.0);
  EntryGameParams p;
  p.players = 2;
  p.delta = -1.0;
  p.x_columns = {{"d", -1, true, Visibility::kCommon},
                 {"", 0, true, Visibility::kCommon},
                 {"", 1, true, Visibility::kCommon}};
  p.beta = {{-0.8, 1.0, 0.0}, {-0.8, 0.0, 1.0}};
  p.x_grid = product_grid({{0.0, 1.0}, x, x}, {{0.6, 0.4}, ux, ux});
  p.eps_grid = product_grid({{-0.3, 0.3, 0.9}, {-0.3, 0.3, 0.9}},
                            {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}});
  double total = 0.0;
  for (const auto& g : p.eps_grid) total += g.weight;
  for (auto& g : p.eps_grid) g.weight /= total;
  return build_entry_game(p);
}

FiniteGame confounded_game() {
  std::vector<GridPoint> joint;
  for (int z = 0; z < 2; ++z) {
    const double pd1 = z == 0 ? 0.2 : 0.8;
    const double lo = z == 0 ? -0.5 : 0.5;
    for (int d = 0; d < 2; ++d) {
      const double pd = d == 1 ? pd1 : 1.0 - pd1;
      for (double e1 : {lo, lo + 0.5}) {
        for (double e2 : {lo, lo + 0.5}) {
          joint.push_back({{static_cast<double>(d), static_cast<double>(z), e1, e2},
                           0.5 * pd * 0.25});
        }
      }
    }
  }
  return build_entry_game_joint(2, -1.0, {{-0.7, 0.0}, {-0.7, 0.0}},
                                {{"d", -1, true, Visibility::kCommon},
                                 {"z", -1, true, Visibility::kCommon}},
                                joint, InfoKind::kComplete);
}

}  // namespace gamecf
