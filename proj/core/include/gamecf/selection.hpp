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

#ifndef GAMECF_SELECTION_HPP_
#define GAMECF_SELECTION_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gamecf/game.hpp"

namespace gamecf {

enum class EqSolver { kPureNe, kBcePoint, kThreshold };

std::string to_string(EqSolver solver);
EqSolver eq_solver_from_string(const std::string& name);

// The w-section of the equilibrium set: distinct outcome distributions
// rho_sigma(. | w) over profiles, in canonical order.
struct StateEquilibria {
  std::vector<std::vector<double>> outcomes;
  // Profile index of each outcome for pure equilibria, -1 otherwise.
  std::vector<int> profiles;
  // Canonical encoding of the set, comparable across games that share the
  // profile space.
  std::string fingerprint;
};

// Outcome vectors are compared after rounding to this grid.
inline constexpr double kFingerprintResolution = 1e-9;

struct EquilibriumCatalog {
  EqSolver solver = EqSolver::kPureNe;
  std::vector<StateEquilibria> states;
};

// pure_ne: per-state pure Nash sets (complete information).
// bce_point: the BCE decision rules maximizing the probability of each
//   profile (per state under complete information, jointly otherwise).
// threshold: cutoff-strategy Bayes-Nash equilibria, enumerated per public
//   cell, for public/private games with binary actions in which every player
//   owns exactly one private coordinate.
EquilibriumCatalog compute_equilibria(const FiniteGame& game, EqSolver solver);

class SelectionRule {
 public:
  enum class Mode {
    kInvariantByState,
    kFirstListed,
    kPlayerFavored,
    kLabelDependent,
    kCustom
  };
  enum class Fallback { kUniform, kHashed };
  using Hook = std::function<std::vector<double>(const FiniteGame&, int w,
                                                 const StateEquilibria&)>;

  // Weights looked up by (state values, fingerprint); unlisted pairs use the
  // fallback. Hashed weights are a deterministic function of (seed, state
  // values, fingerprint).
  static SelectionRule invariant_by_state(Fallback fallback = Fallback::kUniform,
                                          std::uint64_t seed = 0);
  static SelectionRule first_listed();
  // Puts mass one on the equilibrium maximizing player i's expected payoff
  // (first such equilibrium on ties).
  static SelectionRule player_favored(int player);
  // Weights aligned with the equilibrium list, chosen by the game's regime.
  // Lists of a different length are truncated or zero-padded; all-zero
  // aligned weights fall back to uniform.
  static SelectionRule label_dependent(std::vector<double> pre_weights,
                                       std::vector<double> post_weights);
  static SelectionRule custom(Hook hook, std::string name = "custom");

  SelectionRule& set_weights(std::span<const double> state,
                             const std::string& fingerprint,
                             std::vector<double> weights);

  Mode mode() const { return mode_; }
  int player() const { return player_; }
  std::string describe() const;

  // Probability weights over eqs.outcomes at state w.
  std::vector<double> weights(const FiniteGame& game, int w,
                              const StateEquilibria& eqs) const;

 private:
  Mode mode_ = Mode::kFirstListed;
  int player_ = 0;
  Fallback fallback_ = Fallback::kUniform;
  std::uint64_t seed_ = 0;
  std::map<std::string, std::vector<double>> table_;
  std::vector<double> pre_weights_;
  std::vector<double> post_weights_;
  Hook hook_;
  std::string name_;
};

// Canonical text key of a state's values.
std::string state_key(std::span<const double> values);

// rho(y | w) on the game's grid.
class ReducedForm {
 public:
  ReducedForm() = default;
  ReducedForm(int num_states, int num_profiles)
      : num_states_(num_states),
        num_profiles_(num_profiles),
        rho_(static_cast<std::size_t>(num_states) * num_profiles, 0.0),
        defined_(num_states, false) {}

  int num_states() const { return num_states_; }
  int num_profiles() const { return num_profiles_; }
  double operator()(int w, int y) const {
    return rho_[static_cast<std::size_t>(w) * num_profiles_ + y];
  }
  double& at(int w, int y) {
    return rho_[static_cast<std::size_t>(w) * num_profiles_ + y];
  }
  std::span<const double> slice(int w) const {
    return {rho_.data() + static_cast<std::size_t>(w) * num_profiles_,
            static_cast<std::size_t>(num_profiles_)};
  }
  // False only for zero-weight states without equilibria.
  bool defined(int w) const { return defined_[w]; }
  void set_defined(int w) { defined_[w] = true; }

 private:
  int num_states_ = 0;
  int num_profiles_ = 0;
  std::vector<double> rho_;
  std::vector<bool> defined_;
};

ReducedForm reduced_form(const FiniteGame& game, const SelectionRule& rule,
                         EqSolver solver);
ReducedForm reduced_form(const FiniteGame& game, const SelectionRule& rule,
                         const EquilibriumCatalog& catalog);

struct InvarianceReport {
  bool holds = true;
  int states_compared = 0;
  std::string detail;
};

// Checks the invariance condition directly: at every positive-weight
// pre-policy state whose post-policy equilibrium set has the same
// fingerprint, the selection weights must coincide, and repeated evaluation
// must reproduce them.
InvarianceReport check_invariance(const SelectionRule& rule,
                                  const FiniteGame& pre, const FiniteGame& post,
                                  EqSolver solver);

// m(x) = E[Y | X = x] per player under rho and mu_W, with x given on the
// observed coordinates in layout order. Empty when x has no mass.
std::optional<std::vector<double>> conditional_mean(const FiniteGame& game,
                                                    const ReducedForm& rho,
                                                    std::span<const double> x);

}  // namespace gamecf

#endif  // GAMECF_SELECTION_HPP_
