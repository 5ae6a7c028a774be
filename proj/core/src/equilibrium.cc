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

#include "gamecf/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gamecf/error.hpp"
#include "gamecf/normal.hpp"

namespace gamecf {

std::vector<int> enumerate_pure_ne(const FiniteGame& game, int w) {
  if (game.info_kind() != InfoKind::kComplete) {
    throw InvalidArgument("pure Nash sets per state need complete information");
  }
  if (w < 0 || w >= game.num_states()) {
    throw InvalidArgument("state index " + std::to_string(w) + " out of range");
  }
  const auto& ps = game.profiles();
  std::vector<int> out;
  for (int p = 0; p < ps.size(); ++p) {
    bool stable = true;
    for (int i = 0; i < game.num_players() && stable; ++i) {
      const double u = game.payoff(i, p, w);
      for (int a = 0; a < ps.action_count(i); ++a) {
        if (game.payoff(i, ps.with_action(p, i, a), w) > u + kPayoffTolerance) {
          stable = false;
          break;
        }
      }
    }
    if (stable) out.push_back(p);
  }
  return out;
}

RuleLayout::RuleLayout(const FiniteGame& game)
    : num_profiles_(game.profiles().size()) {
  const auto& rows = game.information().rows;
  int offset = 0;
  for (const auto& row : rows) {
    offsets_.push_back(offset);
    draws_.push_back(static_cast<int>(row.size()));
    offset += static_cast<int>(row.size()) * num_profiles_;
  }
  size_ = offset;
}

DecisionRule deterministic_rule(const FiniteGame& game,
                                const std::vector<int>& profile_of_state) {
  if (static_cast<int>(profile_of_state.size()) != game.num_states()) {
    throw InvalidArgument("need one profile per state");
  }
  DecisionRule r{RuleLayout(game), {}};
  r.prob.assign(r.layout.size(), 0.0);
  for (int w = 0; w < game.num_states(); ++w) {
    for (int k = 0; k < r.layout.num_draws(w); ++k) {
      r.prob[r.layout.index(w, k, profile_of_state[w])] = 1.0;
    }
  }
  return r;
}

std::vector<double> rule_outcome(const FiniteGame& game, const DecisionRule& rule,
                                 int w) {
  std::vector<double> out(game.profiles().size(), 0.0);
  const auto& row = game.information().rows[w];
  for (int k = 0; k < static_cast<int>(row.size()); ++k) {
    for (int y = 0; y < game.profiles().size(); ++y) {
      out[y] += row[k].prob * rule(w, k, y);
    }
  }
  return out;
}

BcePolytope build_bce_polytope(const FiniteGame& game) {
  BcePolytope poly{game, RuleLayout(game), {}, 0, 0};
  const auto& L = poly.layout;
  const auto& ps = game.profiles();
  const auto& info = game.information();
  const int n = game.num_players();
  poly.lp.num_vars = L.size();

  for (int w = 0; w < game.num_states(); ++w) {
    for (int k = 0; k < L.num_draws(w); ++k) {
      LinearRow row{{}, Sense::kEq, 1.0};
      for (int y = 0; y < ps.size(); ++y) row.terms.emplace_back(L.index(w, k, y), 1.0);
      poly.lp.rows.push_back(std::move(row));
    }
  }
  poly.num_normalization_rows = static_cast<int>(poly.lp.rows.size());

  for (int i = 0; i < n; ++i) {
    const int ni = ps.action_count(i);
    const int ti_count = info.signal_counts[i];
    // P(t_i) and the draws carrying each own signal.
    std::vector<double> p_ti(ti_count, 0.0);
    std::vector<std::vector<std::pair<int, int>>> cells(ti_count);
    for (int w = 0; w < game.num_states(); ++w) {
      for (int k = 0; k < L.num_draws(w); ++k) {
        const auto& d = info.rows[w][k];
        const int ti = d.profile[i];
        p_ti[ti] += game.weight(w) * d.prob;
        cells[ti].emplace_back(w, k);
      }
    }
    for (int ti = 0; ti < ti_count; ++ti) {
      const double scale = p_ti[ti] > 0.0 ? 1.0 / p_ti[ti] : 1.0;
      for (int rec = 0; rec < ni; ++rec) {
        for (int dev = 0; dev < ni; ++dev) {
          if (dev == rec) continue;
          LinearRow row{{}, Sense::kGe, 0.0};
          for (auto [w, k] : cells[ti]) {
            const double mass = game.weight(w) * info.rows[w][k].prob * scale;
            if (mass == 0.0) continue;
            for (int y = 0; y < ps.size(); ++y) {
              if (ps.action_of(y, i) != rec) continue;
              const double gain =
                  game.payoff(i, y, w) - game.payoff(i, ps.with_action(y, i, dev), w);
              if (gain != 0.0) row.terms.emplace_back(L.index(w, k, y), mass * gain);
            }
          }
          poly.lp.rows.push_back(std::move(row));
        }
      }
    }
  }
  poly.num_obedience_rows =
      static_cast<int>(poly.lp.rows.size()) - poly.num_normalization_rows;
  return poly;
}

bool rule_feasible(const BcePolytope& poly, const DecisionRule& rule,
                   double tolerance) {
  if (static_cast<int>(rule.prob.size()) != poly.layout.size()) return false;
  return max_violation(poly.lp, rule.prob) <= tolerance;
}

FeasiblePoint lp_feasible_point(const BcePolytope& poly) {
  auto res = solve_lp(poly.lp, {});
  FeasiblePoint out;
  out.rule.layout = poly.layout;
  if (res.status != LpStatus::kOptimal) return out;
  out.feasible = true;
  out.rule.prob = std::move(res.x);
  return out;
}

std::pair<double, DecisionRule> bce_maximize(const BcePolytope& poly,
                                             const std::vector<double>& direction) {
  if (static_cast<int>(direction.size()) != poly.layout.size()) {
    throw InvalidArgument("direction length does not match the polytope");
  }
  auto res = solve_lp(poly.lp, direction);
  if (res.status == LpStatus::kInfeasible) {
    throw NumericalFailure("BCE polytope reported empty");
  }
  if (res.status == LpStatus::kUnbounded) {
    throw NumericalFailure("BCE support function reported unbounded");
  }
  return {res.objective, DecisionRule{poly.layout, std::move(res.x)}};
}

double bce_support_function(const BcePolytope& poly,
                            const std::vector<double>& direction) {
  return bce_maximize(poly, direction).first;
}

std::vector<double> lift_outcome_direction(const BcePolytope& poly,
                                           const std::vector<double>& direction,
                                           bool weight_by_state) {
  const auto& g = poly.game;
  const int np = g.profiles().size();
  if (static_cast<int>(direction.size()) != g.num_states() * np) {
    throw InvalidArgument("outcome direction must cover every (state, profile)");
  }
  std::vector<double> lifted(poly.layout.size(), 0.0);
  for (int w = 0; w < g.num_states(); ++w) {
    const double mw = weight_by_state ? g.weight(w) : 1.0;
    for (int k = 0; k < poly.layout.num_draws(w); ++k) {
      const double pk = g.information().rows[w][k].prob * mw;
      for (int y = 0; y < np; ++y) {
        lifted[poly.layout.index(w, k, y)] = pk * direction[w * np + y];
      }
    }
  }
  return lifted;
}

std::vector<double> bce_outcome_set(
    const FiniteGame& game, int w, const std::vector<std::vector<double>>& directions) {
  if (w < 0 || w >= game.num_states()) {
    throw InvalidArgument("state index " + std::to_string(w) + " out of range");
  }
  const int np = game.profiles().size();
  const bool sliced = game.info_kind() == InfoKind::kComplete;
  const BcePolytope poly = build_bce_polytope(sliced ? game.state_slice(w) : game);
  const int local_w = sliced ? 0 : w;
  std::vector<double> out;
  out.reserve(directions.size());
  for (const auto& d : directions) {
    if (static_cast<int>(d.size()) != np) {
      throw InvalidArgument("outcome direction must have one entry per profile");
    }
    std::vector<double> full(static_cast<std::size_t>(poly.game.num_states()) * np, 0.0);
    std::copy(d.begin(), d.end(), full.begin() + static_cast<std::ptrdiff_t>(local_w) * np);
    out.push_back(bce_support_function(poly, lift_outcome_direction(poly, full, false)));
  }
  return out;
}

std::vector<double> bce_joint_outcome_set(
    const BcePolytope& poly, const std::vector<std::vector<double>>& directions) {
  std::vector<double> out;
  out.reserve(directions.size());
  for (const auto& d : directions) {
    out.push_back(bce_support_function(poly, lift_outcome_direction(poly, d, true)));
  }
  return out;
}

double factorization_residual(const FiniteGame& game, const DecisionRule& rule) {
  const auto& ps = game.profiles();
  const int n = game.num_players();
  const auto& info = game.information();
  double worst = 0.0;
  // Marginal of player i at (w, t_i), pinned by the first draw seen.
  for (int w = 0; w < game.num_states(); ++w) {
    std::vector<std::vector<std::vector<double>>> seen(n);
    for (int i = 0; i < n; ++i) seen[i].resize(info.signal_counts[i]);
    for (int k = 0; k < rule.layout.num_draws(w); ++k) {
      std::vector<std::vector<double>> marg(n);
      for (int i = 0; i < n; ++i) marg[i].assign(ps.action_count(i), 0.0);
      for (int y = 0; y < ps.size(); ++y) {
        const double s = rule(w, k, y);
        for (int i = 0; i < n; ++i) marg[i][ps.action_of(y, i)] += s;
      }
      for (int y = 0; y < ps.size(); ++y) {
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= marg[i][ps.action_of(y, i)];
        worst = std::max(worst, std::abs(prod - rule(w, k, y)));
      }
      for (int i = 0; i < n; ++i) {
        auto& ref = seen[i][info.rows[w][k].profile[i]];
        if (ref.empty()) {
          ref = marg[i];
          continue;
        }
        for (std::size_t a = 0; a < ref.size(); ++a) {
          worst = std::max(worst, std::abs(ref[a] - marg[i][a]));
        }
      }
    }
  }
  return worst;
}

namespace {

double symmetry_residual(const FiniteGame& game, const DecisionRule& rule) {
  const auto& ps = game.profiles();
  const int n = game.num_players();
  double worst = 0.0;
  for (int w = 0; w < game.num_states(); ++w) {
    for (int k = 0; k < rule.layout.num_draws(w); ++k) {
      for (int y = 0; y < ps.size(); ++y) {
        auto acts = ps.decode(y);
        std::sort(acts.begin(), acts.end());
        do {
          worst = std::max(worst, std::abs(rule(w, k, y) - rule(w, k, ps.encode(acts))));
        } while (std::next_permutation(acts.begin(), acts.end()));
      }
    }
  }
  (void)n;
  return worst;
}

}  // namespace

std::function<bool(const DecisionRule&)> restrict_rules(
    const BcePolytope& poly, const EquilibriumRestriction& restriction) {
  using Kind = EquilibriumRestriction::Kind;
  if (restriction.kind == Kind::kSymmetric) {
    const auto& ps = poly.game.profiles();
    for (int i = 1; i < ps.num_players(); ++i) {
      if (ps.action_count(i) != ps.action_count(0)) {
        throw InvalidArgument("symmetric restriction needs a common action count");
      }
    }
  }
  if (restriction.kind == Kind::kCustom && !restriction.custom) {
    throw InvalidArgument("custom restriction needs a predicate");
  }
  return [&poly, restriction](const DecisionRule& rule) {
    if (!rule_feasible(poly, rule)) return false;
    switch (restriction.kind) {
      case Kind::kNone:
        return true;
      case Kind::kProductForm:
        return factorization_residual(poly.game, rule) <= restriction.tolerance;
      case Kind::kSymmetric:
        return symmetry_residual(poly.game, rule) <= restriction.tolerance;
      case Kind::kCustom:
        return restriction.custom(rule);
    }
    return false;
  };
}

FiniteGame augment_signals(
    const FiniteGame& game, const std::vector<std::vector<std::vector<double>>>& extra) {
  const int n = game.num_players();
  const auto& info = game.information();
  if (static_cast<int>(extra.size()) != n) {
    throw InvalidArgument("need one extra kernel per player");
  }
  std::vector<int> s_count(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(extra[i].size()) != info.signal_counts[i]) {
      throw InvalidArgument("extra kernel of player " + std::to_string(i + 1) +
                            " needs one row per own signal");
    }
    s_count[i] = static_cast<int>(extra[i].front().size());
    for (const auto& row : extra[i]) {
      if (static_cast<int>(row.size()) != s_count[i] || row.empty()) {
        throw InvalidArgument("extra kernel rows are ragged");
      }
      double total = 0.0;
      for (double p : row) {
        if (!(p >= 0.0)) throw InvalidArgument("extra kernel entry is negative");
        total += p;
      }
      if (std::abs(total - 1.0) > kProbabilityTolerance) {
        throw InvalidArgument("extra kernel row does not sum to 1");
      }
    }
  }
  InformationStructure out;
  for (int i = 0; i < n; ++i) out.signal_counts.push_back(info.signal_counts[i] * s_count[i]);
  out.rows.resize(info.rows.size());
  for (std::size_t w = 0; w < info.rows.size(); ++w) {
    for (const auto& d : info.rows[w]) {
      std::vector<int> s(n, 0);
      while (true) {
        SignalDraw nd{std::vector<int>(n), d.prob};
        for (int i = 0; i < n; ++i) {
          nd.profile[i] = d.profile[i] * s_count[i] + s[i];
          nd.prob *= extra[i][d.profile[i]][s[i]];
        }
        if (nd.prob > 0.0) out.rows[w].push_back(std::move(nd));
        int i = n - 1;
        while (i >= 0 && ++s[i] == s_count[i]) s[i--] = 0;
        if (i < 0) break;
      }
    }
    // Renormalize away rounding in the products.
    double total = 0.0;
    for (const auto& d : out.rows[w]) total += d.prob;
    for (auto& d : out.rows[w]) d.prob /= total;
  }
  return game.with_information(std::move(out));
}

std::string polytope_to_text(const BcePolytope& poly) {
  std::ostringstream os;
  os.precision(17);
  os << "vars " << poly.lp.num_vars << "\n";
  for (std::size_t r = 0; r < poly.lp.rows.size(); ++r) {
    const auto& row = poly.lp.rows[r];
    os << (static_cast<int>(r) < poly.num_normalization_rows ? "norm" : "obey") << r << ":";
    for (const auto& [j, v] : row.terms) os << " " << (v < 0 ? "- " : "+ ") << std::abs(v) << " s" << j;
    os << (row.sense == Sense::kEq ? " = " : row.sense == Sense::kGe ? " >= " : " <= ")
       << row.rhs << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Threshold equilibrium

double threshold_equation(double w, double delta, double mean) {
  return w + delta * (1.0 - normal_cdf(w - mean));
}

ThresholdBne solve_threshold_bne(double delta, double mean) {
  if (!(delta <= 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("threshold equilibrium needs delta <= 0");
  }
  if (!std::isfinite(mean)) throw InvalidArgument("mean must be finite");
  ThresholdBne out{delta, mean, 0.0, 0, 0.0};
  double lo = 0.0;
  double hi = -delta;
  if (threshold_equation(lo, delta, mean) >= 0.0) {
    out.residual = std::abs(threshold_equation(lo, delta, mean));
    return out;
  }
  // Bisect until the bracket stops shrinking in floating point.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++out.iterations;
    const double h = threshold_equation(mid, delta, mean);
    if (h == 0.0) {
      lo = hi = mid;
      break;
    }
    (h < 0.0 ? lo : hi) = mid;
  }
  const double hl = std::abs(threshold_equation(lo, delta, mean));
  const double hh = std::abs(threshold_equation(hi, delta, mean));
  out.w_bar = hl <= hh ? lo : hi;
  out.residual = std::min(hl, hh);
  return out;
}

double deviation_epsilon_bound(double delta, double alpha) {
  const double w_bar = solve_threshold_bne(delta).w_bar;
  return -delta * (1.0 - normal_cdf(w_bar - alpha)) - w_bar;
}

double deviation_gain(double delta, double alpha, double epsilon) {
  if (!(delta < 0.0)) throw InvalidArgument("deviation gain needs delta < 0");
  if (!(alpha > 0.0)) throw InvalidArgument("deviation gain needs alpha > 0");
  const double w_bar = solve_threshold_bne(delta).w_bar;
  const double bound = -delta * (1.0 - normal_cdf(w_bar - alpha)) - w_bar;
  if (!(epsilon > 0.0 && epsilon < bound)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "epsilon %.17g outside admissible interval (0, %.17g)",
                  epsilon, bound);
    throw InvalidArgument(buf);
  }
  const double rival = delta * (1.0 - normal_cdf(w_bar - alpha));
  auto integrand = [&](double v) { return -(rival + v + alpha) * normal_pdf(v); };
  const double a = w_bar - alpha;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, a, a + epsilon, 15, 1e-14);
}

}  // namespace gamecf
