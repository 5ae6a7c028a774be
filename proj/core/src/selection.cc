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

#include "gamecf/selection.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "gamecf/equilibrium.hpp"
#include "gamecf/error.hpp"
#include "gamecf/rng.hpp"

namespace gamecf {
namespace {

using OutcomeKey = std::vector<long long>;

OutcomeKey outcome_key(const std::vector<double>& v) {
  OutcomeKey k(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    k[j] = std::llround(v[j] / kFingerprintResolution);
  }
  return k;
}

std::string join_key(const OutcomeKey& k) {
  std::string s;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(k[j]);
  }
  return s;
}

StateEquilibria from_outcomes(std::vector<std::vector<double>> outcomes) {
  std::map<OutcomeKey, std::vector<double>> unique;
  for (auto& o : outcomes) unique.emplace(outcome_key(o), std::move(o));
  StateEquilibria se;
  se.fingerprint = "o:";
  bool first = true;
  for (auto& [k, o] : unique) {
    if (!first) se.fingerprint += ';';
    first = false;
    se.fingerprint += join_key(k);
    se.outcomes.push_back(std::move(o));
    se.profiles.push_back(-1);
  }
  return se;
}

StateEquilibria from_profiles(const std::vector<int>& profiles, int num_profiles) {
  StateEquilibria se;
  se.fingerprint = "p:";
  for (std::size_t j = 0; j < profiles.size(); ++j) {
    if (j) se.fingerprint += ',';
    se.fingerprint += std::to_string(profiles[j]);
    std::vector<double> o(num_profiles, 0.0);
    o[profiles[j]] = 1.0;
    se.outcomes.push_back(std::move(o));
    se.profiles.push_back(profiles[j]);
  }
  return se;
}

std::vector<double> unit(int n, int j) {
  std::vector<double> v(n, 0.0);
  v[j] = 1.0;
  return v;
}

EquilibriumCatalog bce_points(const FiniteGame& game) {
  const int np = game.profiles().size();
  const int ns = game.num_states();
  EquilibriumCatalog cat{EqSolver::kBcePoint, {}};
  cat.states.reserve(ns);
  if (game.info_kind() == InfoKind::kComplete) {
    for (int w = 0; w < ns; ++w) {
      const BcePolytope poly = build_bce_polytope(game.state_slice(w));
      std::vector<std::vector<double>> outs;
      for (int y = 0; y < np; ++y) {
        auto [value, rule] = bce_maximize(poly, lift_outcome_direction(poly, unit(np, y), false));
        outs.push_back(rule_outcome(poly.game, rule, 0));
      }
      cat.states.push_back(from_outcomes(std::move(outs)));
    }
    return cat;
  }
  const BcePolytope poly = build_bce_polytope(game);
  std::vector<std::vector<std::vector<double>>> per_state(ns);
  for (int y = 0; y < np; ++y) {
    std::vector<double> d(static_cast<std::size_t>(ns) * np, 0.0);
    for (int w = 0; w < ns; ++w) d[static_cast<std::size_t>(w) * np + y] = 1.0;
    auto [value, rule] = bce_maximize(poly, lift_outcome_direction(poly, d, true));
    for (int w = 0; w < ns; ++w) per_state[w].push_back(rule_outcome(game, rule, w));
  }
  for (int w = 0; w < ns; ++w) cat.states.push_back(from_outcomes(std::move(per_state[w])));
  return cat;
}

EquilibriumCatalog threshold_points(const FiniteGame& game) {
  if (game.info_kind() != InfoKind::kPublicPrivate) {
    throw InvalidArgument("threshold solver needs public/private information");
  }
  const int n = game.num_players();
  const auto& ps = game.profiles();
  const auto& layout = game.layout();
  std::vector<int> own(n, -1);
  std::vector<int> common;
  for (int k = 0; k < layout.size(); ++k) {
    const auto& c = layout[k];
    if (c.visibility == Visibility::kCommon) {
      common.push_back(k);
    } else if (own[c.owner] >= 0) {
      throw InvalidArgument("threshold solver needs one private coordinate per player");
    } else {
      own[c.owner] = k;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (own[i] < 0) throw InvalidArgument("threshold solver needs one private coordinate per player");
    if (ps.action_count(i) != 2) throw InvalidArgument("threshold solver needs binary actions");
  }
  // Group states by public cell.
  std::map<std::vector<double>, std::vector<int>> cells;
  for (int w = 0; w < game.num_states(); ++w) {
    std::vector<double> key;
    for (int k : common) key.push_back(game.state(w)[k]);
    cells[key].push_back(w);
  }
  std::vector<std::vector<std::vector<double>>> per_state(game.num_states());
  for (const auto& [key, members] : cells) {
    // rank[i][w]: position of player i's private value among the cell's values.
    std::vector<std::vector<double>> values(n);
    for (int i = 0; i < n; ++i) {
      for (int w : members) values[i].push_back(game.state(w)[own[i]]);
      std::sort(values[i].begin(), values[i].end());
      values[i].erase(std::unique(values[i].begin(), values[i].end()), values[i].end());
    }
    auto rank = [&](int i, int w) {
      const double v = game.state(w)[own[i]];
      return static_cast<int>(std::lower_bound(values[i].begin(), values[i].end(), v) -
                              values[i].begin());
    };
    // Cutoff c_i in [0, |V_i|]: enter iff rank >= c_i.
    std::vector<int> cut(n, 0);
    while (true) {
      auto profile_at = [&](int w) {
        std::vector<int> a(n);
        for (int i = 0; i < n; ++i) a[i] = rank(i, w) >= cut[i] ? 1 : 0;
        return ps.encode(a);
      };
      bool equilibrium = true;
      for (int i = 0; i < n && equilibrium; ++i) {
        std::vector<double> gain(values[i].size(), 0.0);
        std::vector<double> mass(values[i].size(), 0.0);
        for (int w : members) {
          const int p = profile_at(w);
          const int r = rank(i, w);
          mass[r] += game.weight(w);
          gain[r] += game.weight(w) * (game.payoff(i, ps.with_action(p, i, 1), w) -
                                       game.payoff(i, ps.with_action(p, i, 0), w));
        }
        for (std::size_t r = 0; r < values[i].size(); ++r) {
          if (mass[r] <= 0.0) continue;
          const double g = gain[r] / mass[r];
          const bool enters = static_cast<int>(r) >= cut[i];
          if ((enters && g < -kPayoffTolerance) || (!enters && g > kPayoffTolerance)) {
            equilibrium = false;
            break;
          }
        }
      }
      if (equilibrium) {
        for (int w : members) per_state[w].push_back(unit(ps.size(), profile_at(w)));
      }
      int i = n - 1;
      while (i >= 0 && ++cut[i] > static_cast<int>(values[i].size())) cut[i--] = 0;
      if (i < 0) break;
    }
  }
  EquilibriumCatalog cat{EqSolver::kThreshold, {}};
  for (auto& outs : per_state) cat.states.push_back(from_outcomes(std::move(outs)));
  return cat;
}

std::vector<double> normalized(std::vector<double> w) {
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("selection weights must be finite and non-negative");
    }
    total += v;
  }
  if (total <= 0.0) return {};
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

std::string to_string(EqSolver solver) {
  switch (solver) {
    case EqSolver::kPureNe:
      return "pure_ne";
    case EqSolver::kBcePoint:
      return "bce_point";
    case EqSolver::kThreshold:
      return "threshold";
  }
  return "?";
}

EqSolver eq_solver_from_string(const std::string& name) {
  if (name == "pure_ne") return EqSolver::kPureNe;
  if (name == "bce_point") return EqSolver::kBcePoint;
  if (name == "threshold") return EqSolver::kThreshold;
  throw InvalidArgument("unknown equilibrium solver '" + name + "'");
}

EquilibriumCatalog compute_equilibria(const FiniteGame& game, EqSolver solver) {
  switch (solver) {
    case EqSolver::kPureNe: {
      EquilibriumCatalog cat{solver, {}};
      cat.states.reserve(game.num_states());
      for (int w = 0; w < game.num_states(); ++w) {
        cat.states.push_back(from_profiles(enumerate_pure_ne(game, w), game.profiles().size()));
      }
      return cat;
    }
    case EqSolver::kBcePoint:
      return bce_points(game);
    case EqSolver::kThreshold:
      return threshold_points(game);
  }
  throw InvalidArgument("unknown equilibrium solver");
}

std::string state_key(std::span<const double> values) {
  std::string s;
  char buf[32];
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) s += ',';
    auto res = std::to_chars(buf, buf + sizeof buf, values[k]);
    s.append(buf, res.ptr);
  }
  return s;
}

// --------------------------------------------------------------------------
// SelectionRule

SelectionRule SelectionRule::invariant_by_state(Fallback fallback, std::uint64_t seed) {
  SelectionRule r;
  r.mode_ = Mode::kInvariantByState;
  r.fallback_ = fallback;
  r.seed_ = seed;
  return r;
}

SelectionRule SelectionRule::first_listed() {
  SelectionRule r;
  r.mode_ = Mode::kFirstListed;
  return r;
}

SelectionRule SelectionRule::player_favored(int player) {
  if (player < 0) throw InvalidArgument("favored player index must be non-negative");
  SelectionRule r;
  r.mode_ = Mode::kPlayerFavored;
  r.player_ = player;
  return r;
}

SelectionRule SelectionRule::label_dependent(std::vector<double> pre_weights,
                                             std::vector<double> post_weights) {
  SelectionRule r;
  r.mode_ = Mode::kLabelDependent;
  r.pre_weights_ = std::move(pre_weights);
  r.post_weights_ = std::move(post_weights);
  for (double v : r.pre_weights_) {
    if (!(v >= 0.0)) throw InvalidArgument("selection weights must be non-negative");
  }
  for (double v : r.post_weights_) {
    if (!(v >= 0.0)) throw InvalidArgument("selection weights must be non-negative");
  }
  return r;
}

SelectionRule SelectionRule::custom(Hook hook, std::string name) {
  if (!hook) throw InvalidArgument("custom selection needs a hook");
  SelectionRule r;
  r.mode_ = Mode::kCustom;
  r.hook_ = std::move(hook);
  r.name_ = std::move(name);
  return r;
}

SelectionRule& SelectionRule::set_weights(std::span<const double> state,
                                          const std::string& fingerprint,
                                          std::vector<double> weights) {
  if (mode_ != Mode::kInvariantByState) {
    throw InvalidArgument("only invariant_by_state rules carry a weight table");
  }
  auto w = normalized(std::move(weights));
  if (w.empty()) throw InvalidArgument("selection weights sum to zero");
  table_[state_key(state) + "|" + fingerprint] = std::move(w);
  return *this;
}

std::string SelectionRule::describe() const {
  switch (mode_) {
    case Mode::kInvariantByState:
      return fallback_ == Fallback::kUniform
                 ? "invariant_by_state(uniform)"
                 : "invariant_by_state(hashed," + std::to_string(seed_) + ")";
    case Mode::kFirstListed:
      return "first_listed";
    case Mode::kPlayerFavored:
      return "player_favored(" + std::to_string(player_ + 1) + ")";
    case Mode::kLabelDependent:
      return "label_dependent";
    case Mode::kCustom:
      return name_;
  }
  return "?";
}

std::vector<double> SelectionRule::weights(const FiniteGame& game, int w,
                                           const StateEquilibria& eqs) const {
  const int k = static_cast<int>(eqs.outcomes.size());
  if (k == 0) throw InvalidArgument("empty equilibrium set");
  std::vector<double> uniform(k, 1.0 / k);
  switch (mode_) {
    case Mode::kFirstListed: {
      std::vector<double> out(k, 0.0);
      out[0] = 1.0;
      return out;
    }
    case Mode::kPlayerFavored: {
      if (player_ >= game.num_players()) {
        throw InvalidArgument("favored player does not exist");
      }
      int best = 0;
      double best_value = -std::numeric_limits<double>::infinity();
      for (int e = 0; e < k; ++e) {
        double v = 0.0;
        for (int y = 0; y < game.profiles().size(); ++y) {
          v += eqs.outcomes[e][y] * game.payoff(player_, y, w);
        }
        if (v > best_value + kPayoffTolerance) {
          best_value = v;
          best = e;
        }
      }
      std::vector<double> out(k, 0.0);
      out[best] = 1.0;
      return out;
    }
    case Mode::kLabelDependent: {
      const auto& src = game.regime() == Regime::kPre ? pre_weights_ : post_weights_;
      std::vector<double> aligned(k, 0.0);
      for (int e = 0; e < k && e < static_cast<int>(src.size()); ++e) aligned[e] = src[e];
      auto out = normalized(std::move(aligned));
      return out.empty() ? uniform : out;
    }
    case Mode::kCustom: {
      auto out = normalized(hook_(game, w, eqs));
      if (static_cast<int>(out.size()) != k) {
        throw InvalidArgument("custom selection returned malformed weights");
      }
      return out;
    }
    case Mode::kInvariantByState:
      break;
  }
  const std::string skey = state_key(game.state(w));
  if (auto it = table_.find(skey + "|" + eqs.fingerprint); it != table_.end()) {
    if (static_cast<int>(it->second.size()) != k) {
      throw InvalidArgument("selection table entry does not match the equilibrium set");
    }
    return it->second;
  }
  if (fallback_ == Fallback::kUniform) return uniform;
  std::uint64_t h = mix64(seed_);
  for (char c : skey + "|" + eqs.fingerprint) h = mix64(h ^ static_cast<unsigned char>(c));
  std::vector<double> out(k);
  for (int e = 0; e < k; ++e) {
    h = mix64(h + static_cast<std::uint64_t>(e));
    out[e] = 0.05 + static_cast<double>(h >> 11) * 0x1.0p-53;
  }
  return normalized(std::move(out));
}

// --------------------------------------------------------------------------
// Reduced forms

ReducedForm reduced_form(const FiniteGame& game, const SelectionRule& rule,
                         EqSolver solver) {
  return reduced_form(game, rule, compute_equilibria(game, solver));
}

ReducedForm reduced_form(const FiniteGame& game, const SelectionRule& rule,
                         const EquilibriumCatalog& catalog) {
  const int np = game.profiles().size();
  ReducedForm rf(game.num_states(), np);
  for (int w = 0; w < game.num_states(); ++w) {
    const auto& eqs = catalog.states[w];
    if (eqs.outcomes.empty()) {
      if (game.weight(w) > 0.0) {
        throw InvalidArgument("no equilibrium at state " + std::to_string(w) + " (" +
                              state_key(game.state(w)) + ")");
      }
      continue;
    }
    const auto wts = rule.weights(game, w, eqs);
    for (std::size_t e = 0; e < wts.size(); ++e) {
      if (wts[e] == 0.0) continue;
      for (int y = 0; y < np; ++y) rf.at(w, y) += wts[e] * eqs.outcomes[e][y];
    }
    rf.set_defined(w);
  }
  return rf;
}

InvarianceReport check_invariance(const SelectionRule& rule, const FiniteGame& pre,
                                  const FiniteGame& post, EqSolver solver) {
  InvarianceReport report;
  const auto pre_eq = compute_equilibria(pre, solver);
  const auto post_eq = compute_equilibria(post, solver);
  for (int w = 0; w < pre.num_states(); ++w) {
    if (pre.weight(w) <= 0.0) continue;
    auto u = post.find_state(pre.state(w));
    if (!u) continue;
    const auto& a = pre_eq.states[w];
    const auto& b = post_eq.states[*u];
    if (a.fingerprint != b.fingerprint || a.outcomes.empty()) continue;
    ++report.states_compared;
    const auto wa = rule.weights(pre, w, a);
    const auto wa2 = rule.weights(pre, w, a);
    const auto wb = rule.weights(post, *u, b);
    if (wa != wa2) {
      report.holds = false;
      report.detail = "selection is not reproducible at state " + state_key(pre.state(w));
      return report;
    }
    if (wa != wb) {
      report.holds = false;
      report.detail = "selection changes at state " + state_key(pre.state(w)) +
                      " although its equilibrium set is unchanged";
      return report;
    }
  }
  return report;
}

std::optional<std::vector<double>> conditional_mean(const FiniteGame& game,
                                                    const ReducedForm& rho,
                                                    std::span<const double> x) {
  const auto obs = game.layout().observed_indices();
  if (x.size() != obs.size()) {
    throw InvalidArgument("x must list every observed coordinate");
  }
  const int n = game.num_players();
  const auto& ps = game.profiles();
  std::vector<double> sum(n, 0.0);
  double mass = 0.0;
  for (int w = 0; w < game.num_states(); ++w) {
    if (game.weight(w) <= 0.0) continue;
    bool match = true;
    for (std::size_t j = 0; j < obs.size() && match; ++j) {
      match = std::abs(game.state(w)[obs[j]] - x[j]) <= kStateMatchTolerance;
    }
    if (!match) continue;
    mass += game.weight(w);
    for (int y = 0; y < ps.size(); ++y) {
      const double p = game.weight(w) * rho(w, y);
      if (p == 0.0) continue;
      for (int i = 0; i < n; ++i) sum[i] += p * game.actions(i)[ps.action_of(y, i)];
    }
  }
  if (mass <= 0.0) return std::nullopt;
  for (double& v : sum) v /= mass;
  return sum;
}

}  // namespace gamecf
