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

#include "gamecf/simulate.hpp"

#include <algorithm>

#include "gamecf/error.hpp"
#include "gamecf/parallel.hpp"
#include "gamecf/rng.hpp"

namespace gamecf {
namespace {

int draw(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(),
                                   u * cumulative.back());
  return static_cast<int>(std::min<std::ptrdiff_t>(
      it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

std::vector<double> cumsum(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) c[k] = (s += p[k]);
  return c;
}

}  // namespace

Dataset simulate(const FiniteGame& game, const SelectionRule& rule, EqSolver solver,
                 int markets, std::uint64_t seed) {
  return simulate(game, rule, compute_equilibria(game, solver), markets, seed);
}

Dataset simulate(const FiniteGame& game, const SelectionRule& rule,
                 const EquilibriumCatalog& catalog, int markets, std::uint64_t seed) {
  if (markets < 1) throw InvalidArgument("simulate needs at least one market");
  const int n = game.num_players();
  const int ns = game.num_states();
  const auto& ps = game.profiles();
  const auto obs = game.layout().observed_indices();

  // Per-state equilibrium weights and outcome CDFs.
  std::vector<std::vector<double>> eq_cdf(ns);
  std::vector<std::vector<std::vector<double>>> y_cdf(ns);
  for (int w = 0; w < ns; ++w) {
    if (game.weight(w) <= 0.0) continue;
    const auto& eqs = catalog.states.at(w);
    if (eqs.outcomes.empty()) {
      throw InvalidArgument("no equilibrium at state " + std::to_string(w));
    }
    eq_cdf[w] = cumsum(rule.weights(game, w, eqs));
    for (const auto& o : eqs.outcomes) y_cdf[w].push_back(cumsum(o));
  }
  const auto state_cdf = cumsum(game.weights());

  std::vector<std::string> y_names;
  for (int i = 0; i < n; ++i) y_names.push_back("y_" + std::to_string(i + 1));
  std::vector<std::string> x_names;
  for (int k : obs) x_names.push_back(game.layout()[k].name);

  std::vector<double> ys(static_cast<std::size_t>(markets) * n);
  std::vector<double> xs(static_cast<std::size_t>(markets) * obs.size());
  constexpr int kChunk = 4096;
  const int chunks = (markets + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](int c) {
    const int end = std::min(markets, (c + 1) * kChunk);
    for (int m = c * kChunk; m < end; ++m) {
      CounterRng rng(seed, static_cast<std::uint64_t>(m) + 1);
      const int w = draw(state_cdf, rng.uniform());
      const int e = draw(eq_cdf[w], rng.uniform());
      const int y = draw(y_cdf[w][e], rng.uniform());
      for (int i = 0; i < n; ++i) {
        ys[static_cast<std::size_t>(m) * n + i] = game.actions(i)[ps.action_of(y, i)];
      }
      for (std::size_t j = 0; j < obs.size(); ++j) {
        xs[static_cast<std::size_t>(m) * obs.size() + j] = game.state(w)[obs[j]];
      }
    }
  });

  Dataset data(std::move(y_names), std::move(x_names));
  data.reserve(markets);
  for (int m = 0; m < markets; ++m) {
    data.add(m + 1,
             std::span<const double>(ys.data() + static_cast<std::size_t>(m) * n, n),
             std::span<const double>(xs.data() + static_cast<std::size_t>(m) * obs.size(),
                                     obs.size()));
  }
  data.provenance = Provenance{seed, game_hash(game), rule.describe(), to_string(catalog.solver)};
  return data;
}

}  // namespace gamecf
