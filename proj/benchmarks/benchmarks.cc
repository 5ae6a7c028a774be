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


#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gamecf/counterfactual.hpp"
#include "gamecf/equilibrium.hpp"
#include "gamecf/instances.hpp"
#include "gamecf/kernel.hpp"
#include "gamecf/simulate.hpp"

namespace gamecf {
namespace {

void BM_BceSupportFunction(benchmark::State& state) {
  const auto inst = random_instance(1, static_cast<int>(state.range(0)));
  const auto poly = build_bce_polytope(inst.game);
  std::vector<double> dir(inst.game.num_states() * inst.game.profiles().size());
  for (std::size_t k = 0; k < dir.size(); ++k) dir[k] = (k % 3) - 1.0;
  const auto lifted = lift_outcome_direction(poly, dir, true);
  for (auto _ : state) benchmark::DoNotOptimize(bce_support_function(poly, lifted));
  state.counters["vars"] = poly.lp.num_vars;
  state.counters["rows"] = static_cast<double>(poly.lp.rows.size());
}
BENCHMARK(BM_BceSupportFunction)->Arg(0)->Arg(1)->Arg(2);

void BM_Bounds(benchmark::State& state) {
  const auto inst = random_instance(2, 0);
  for (auto _ : state) {
    const auto pre = reduced_form(inst.game, inst.rule, inst.solver);
    benchmark::DoNotOptimize(bounds(pre, inst.game, inst.policy, inst.h, inst.C));
  }
}
BENCHMARK(BM_Bounds);

void BM_KernelLeaveOneOut(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Design D;
  D.rows = M;
  D.cols = 2;
  D.discrete = {false, true};
  std::vector<double> y;
  for (int m = 0; m < M; ++m) {
    D.values.push_back(U(gen));
    D.values.push_back(m % 2);
    y.push_back(U(gen));
  }
  KernelSmoother ks(D, y, 1, KernelFamily::kQuartic, rule_of_thumb_bandwidth(D));
  for (auto _ : state) {
    double s = 0.0;
    for (int m = 0; m < M; ++m) {
      if (auto f = ks.fit(D.row(m), m)) s += (*f)[0];
    }
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * M);
}
BENCHMARK(BM_KernelLeaveOneOut)->Arg(1000)->Arg(20000);

void BM_Simulate(benchmark::State& state) {
  const auto game = estimation_game();
  const auto rule = SelectionRule::invariant_by_state();
  const auto catalog = compute_equilibria(game, EqSolver::kPureNe);
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(game, rule, catalog, M, 7));
  state.SetItemsProcessed(state.iterations() * M);
}
BENCHMARK(BM_Simulate)->Arg(20000);

}  // namespace
}  // namespace gamecf

BENCHMARK_MAIN();
