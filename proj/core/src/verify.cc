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

#include "gamecf/verify.hpp"

#include <algorithm>
#include <cmath>

#include "gamecf/counterfactual.hpp"
#include "gamecf/equilibrium.hpp"
#include "gamecf/error.hpp"
#include "gamecf/instances.hpp"
#include "gamecf/normal.hpp"
#include "gamecf/rng.hpp"

namespace gamecf {
namespace {

constexpr int kDirections = 50;

void record(SuiteResult& r, double violation, const nlohmann::json& instance) {
  ++r.checked;
  if (violation > r.tolerance && (r.passed || violation > r.worst)) r.failing = instance;
  if (violation > r.tolerance) r.passed = false;
  r.worst = std::max(r.worst, violation);
}

std::vector<std::vector<double>> random_directions(CounterRng& rng, int count, int dim) {
  std::vector<std::vector<double>> dirs(count, std::vector<double>(dim));
  for (auto& d : dirs) {
    for (double& v : d) v = rng.normal();
  }
  return dirs;
}

}  // namespace

nlohmann::json SuiteResult::to_json() const {
  nlohmann::json j = {{"suite", name},
                      {"passed", passed},
                      {"negative_control", negative_control},
                      {"checked", checked},
                      {"worst", worst},
                      {"tolerance", tolerance},
                      {"detail", detail}};
  if (!failing.is_null()) j["instance"] = failing;
  return j;
}

SuiteResult verify_sandwich(const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "sandwich";
  r.tolerance = 1e-9;
  for (int k = 0; k < opt.instances; ++k) {
    const Instance inst = random_instance(opt.seed, k);
    const auto rf = reduced_form(inst.game, inst.rule, inst.solver);
    const auto b = bounds(rf, inst.game, inst.policy, inst.h, inst.C, true);
    const double e = ep(inst.game, inst.policy, inst.rule, inst.solver, inst.h, inst.C);
    auto d = inst.describe();
    d["ep"] = e;
    d["lower"] = b.lower;
    d["upper"] = b.upper;
    record(r, std::max({0.0, b.lower - e, e - b.upper}), d);
  }
  r.detail = "max(lower - EP, EP - upper, 0)";
  return r;
}

SuiteResult verify_dummy_exactness(const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "dummy_exactness";
  r.tolerance = 1e-12;
  for (int k = 0; k < opt.instances; ++k) {
    const Instance inst = dummy_to_zero_instance(opt.seed, k);
    const auto rf = reduced_form(inst.game, inst.rule, inst.solver);
    const double d = dp(rf, inst.game, inst.policy, inst.h, inst.C);
    const double e = ep(inst.game, inst.policy, inst.rule, inst.solver, inst.h, inst.C);
    const double eb = error_bound(inst.game, inst.policy, inst.C);
    auto desc = inst.describe();
    desc["ep"] = e;
    desc["dp"] = d;
    desc["eb"] = eb;
    record(r, std::max(std::abs(e - d), eb), desc);
  }
  r.detail = "max(|EP - DP|, EB)";
  return r;
}

SuiteResult verify_sharpness(const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "sharpness";
  r.tolerance = opt.eps;
  int k = 0;
  int found = 0;
  while (found < opt.instances && k < 50 * opt.instances) {
    const Instance inst = random_instance(opt.seed, k++);
    if (error_bound(inst.game, inst.policy, inst.C) <= 0.0) continue;
    ++found;
    for (BoundSide side : {BoundSide::kLower, BoundSide::kUpper}) {
      auto desc = inst.describe();
      desc["side"] = side == BoundSide::kLower ? "lower" : "upper";
      double gap;
      try {
        const auto sc = sharpness_game(inst.game, inst.policy, inst.h, side, opt.eps, inst.C);
        const auto rf = reduced_form(sc.game, sc.rule, sc.solver);
        const auto b = bounds(rf, sc.game, inst.policy, inst.h, inst.C, true);
        const double e = ep(sc.game, inst.policy, sc.rule, sc.solver, inst.h, inst.C);
        gap = std::abs(e - (side == BoundSide::kLower ? b.lower : b.upper));
      } catch (const Error& err) {
        // Supports that do not overlap leave nothing to attain.
        if (err.code() == "invalid_argument") {
          --found;
          break;
        }
        desc["error"] = err.what();
        gap = HUGE_VAL;
      }
      record(r, gap, desc);
    }
  }
  r.detail = "|EP(constructed game) - bound|, both sides";
  return r;
}

SuiteResult verify_invariance(const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "invariance";
  for (int k = 0; k < opt.instances; ++k) {
    const Instance inst = random_instance(opt.seed, k);
    const auto post = apply_policy(inst.game, inst.policy);
    const auto rep = check_invariance(inst.rule, inst.game, post, inst.solver);
    auto desc = inst.describe();
    if (!rep.holds) desc["detail"] = rep.detail;
    record(r, rep.holds ? 0.0 : 1.0, desc);
  }
  r.detail = "direct check of state-keyed selection";
  return r;
}

SuiteResult verify_negative_control() {
  SuiteResult r;
  r.name = "label_dependent";
  r.negative_control = true;
  r.tolerance = 0.05;
  const Instance inst = label_dependent_instance();
  const auto rf = reduced_form(inst.game, inst.rule, inst.solver);
  const auto b = bounds(rf, inst.game, inst.policy, inst.h, inst.C, false);
  const double e = ep(inst.game, inst.policy, inst.rule, inst.solver, inst.h, inst.C);
  r.checked = 1;
  r.worst = std::max({0.0, b.lower - e, e - b.upper});
  r.passed = r.worst > r.tolerance;
  r.failing = inst.describe();
  r.failing["ep"] = e;
  r.failing["lower"] = b.lower;
  r.failing["upper"] = b.upper;
  r.detail = "expected failure: sandwich violation must exceed the tolerance";
  return r;
}

SuiteResult verify_bce_embedding(const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "bce_ne_embedding";
  for (int k = 0; k < opt.instances; ++k) {
    const Instance inst = random_instance(opt.seed, k);
    const auto poly = build_bce_polytope(inst.game);
    std::vector<std::vector<int>> ne(inst.game.num_states());
    std::size_t most = 0;
    for (int w = 0; w < inst.game.num_states(); ++w) {
      ne[w] = enumerate_pure_ne(inst.game, w);
      most = std::max(most, ne[w].size());
    }
    // Rule j plays the (j mod count)-th equilibrium at every state, which
    // visits every per-state equilibrium at least once.
    for (std::size_t j = 0; j < most; ++j) {
      std::vector<int> prof(inst.game.num_states());
      for (int w = 0; w < inst.game.num_states(); ++w) prof[w] = ne[w][j % ne[w].size()];
      const bool ok = rule_feasible(poly, deterministic_rule(inst.game, prof));
      record(r, ok ? 0.0 : 1.0, inst.describe());
    }
  }
  r.detail = "deterministic NE rules inside the BCE polytope";
  return r;
}

SuiteResult verify_bce_dominant(const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "bce_dominant_singleton";
  r.tolerance = 1e-9;
  const int games = std::max(5, opt.instances / 5);
  for (int k = 0; k < games; ++k) {
    const FiniteGame g = random_dominant_game(opt.seed, k);
    CounterRng rng(opt.seed ^ 0xb0ceULL, static_cast<std::uint64_t>(k));
    auto dirs = random_directions(rng, kDirections, g.profiles().size());
    std::vector<std::vector<double>> both = dirs;
    for (auto d : dirs) {
      for (double& v : d) v = -v;
      both.push_back(std::move(d));
    }
    double spread = 0.0;
    for (int w = 0; w < g.num_states(); ++w) {
      const auto s = bce_outcome_set(g, w, both);
      for (int d = 0; d < kDirections; ++d) spread = std::max(spread, s[d] + s[d + kDirections]);
    }
    record(r, spread, {{"family", "dominant"}, {"seed", opt.seed}, {"index", k}});
  }
  r.detail = "max over directions of s(d) + s(-d)";
  return r;
}

SuiteResult verify_bce_augmentation(const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "bce_signal_augmentation";
  r.tolerance = 1e-8;
  const int games = std::max(3, opt.instances / 10);
  for (int k = 0; k < games; ++k) {
    const FiniteGame g = random_public_private_game(opt.seed, k);
    CounterRng rng(opt.seed ^ 0xa06ULL, static_cast<std::uint64_t>(k));
    std::vector<std::vector<std::vector<double>>> extra(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) {
      extra[i].resize(g.information().signal_counts[i]);
      for (auto& row : extra[i]) {
        const double u = 0.1 + 0.8 * rng.uniform();
        row = {u, 1.0 - u};
      }
    }
    const FiniteGame aug = augment_signals(g, extra);
    const auto p0 = build_bce_polytope(g);
    const auto p1 = build_bce_polytope(aug);
    const auto dirs = random_directions(rng, kDirections, g.num_states() * g.profiles().size());
    const auto s0 = bce_joint_outcome_set(p0, dirs);
    const auto s1 = bce_joint_outcome_set(p1, dirs);
    double gap = 0.0;
    for (int d = 0; d < kDirections; ++d) gap = std::max(gap, std::abs(s0[d] - s1[d]));
    record(r, gap, {{"family", "public_private"}, {"seed", opt.seed}, {"index", k}});
  }
  r.detail = "max |s_original(d) - s_augmented(d)|";
  return r;
}

SuiteResult verify_threshold() {
  SuiteResult r;
  r.name = "threshold_example";
  const double delta = -1.0;
  const double alpha = 0.5;
  const auto pre = solve_threshold_bne(delta);
  const auto post = solve_threshold_bne(delta, alpha);
  const double decomposition = 1.0 - normal_cdf(pre.w_bar - alpha);
  const double post_entry = 1.0 - normal_cdf(post.w_bar - alpha);
  const double eps = 0.5 * deviation_epsilon_bound(delta, alpha);
  const double gain = deviation_gain(delta, alpha, eps);
  r.checked = 1;
  r.passed = gain > 0.0 && std::abs(decomposition - post_entry) > 1e-3 &&
             std::abs(pre.residual) < 1e-12;
  r.worst = std::abs(pre.residual);
  r.failing = {{"w_bar", pre.w_bar},
               {"post_w_bar", post.w_bar},
               {"decomposition_entry", decomposition},
               {"post_policy_entry", post_entry},
               {"epsilon", eps},
               {"deviation_gain", gain}};
  r.detail = "deviation gain > 0 and |decomposition - post-policy entry| > 1e-3";
  return r;
}

std::vector<SuiteResult> run_all(const VerifyOptions& opt) {
  std::vector<SuiteResult> out;
  out.push_back(verify_sandwich(opt));
  out.push_back(verify_dummy_exactness(opt));
  out.push_back(verify_sharpness(opt));
  out.push_back(verify_invariance(opt));
  out.push_back(verify_bce_embedding(opt));
  out.push_back(verify_bce_dominant(opt));
  out.push_back(verify_bce_augmentation(opt));
  out.push_back(verify_threshold());
  if (opt.negative_control) out.push_back(verify_negative_control());
  return out;
}

}  // namespace gamecf
