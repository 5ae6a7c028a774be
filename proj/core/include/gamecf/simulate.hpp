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

#ifndef GAMECF_SIMULATE_HPP_
#define GAMECF_SIMULATE_HPP_

#include <cstdint>

#include "gamecf/dataset.hpp"
#include "gamecf/game.hpp"
#include "gamecf/selection.hpp"

namespace gamecf {

// Draws M i.i.d. markets: w ~ mu_W, an equilibrium from the selection rule
// at w, then y ~ rho_sigma(. | w). Market m uses the RNG substream
// (seed, m), so the output is independent of the thread count. Only
// observed coordinates are emitted, under their coordinate names.
Dataset simulate(const FiniteGame& game, const SelectionRule& rule,
                 EqSolver solver, int markets, std::uint64_t seed);
Dataset simulate(const FiniteGame& game, const SelectionRule& rule,
                 const EquilibriumCatalog& catalog, int markets, std::uint64_t seed);

}  // namespace gamecf

#endif  // GAMECF_SIMULATE_HPP_
