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


#ifndef GAMECF_ESTIMATORS_HPP_
#define GAMECF_ESTIMATORS_HPP_

#include <span>
#include <string>
#include <vector>

#include "gamecf/dataset.hpp"
#include "gamecf/functional.hpp"
#include "gamecf/game.hpp"
#include "gamecf/kernel.hpp"

namespace gamecf {

struct KernelConfig {
  KernelFamily family = KernelFamily::kQuartic;
  // Fixed bandwidth shared by every player; <= 0 selects one per player by
  // cross-validation over `grid` (default grid when empty).
  double bandwidth = 0.0;
  // Per-player fixed bandwidths; take precedence over `bandwidth` when set.
  std::vector<double> player_bandwidths;
  std::vector<double> grid;
  // Covariates matched exactly. Every other covariate is continuous.
  std::vector<std::string> discrete;
  // Covariates entering the regression; empty means all of them.
  std::vector<std::string> columns;
};

// Bandwidth of every player: fixed, or cross-validated on `design`.
std::vector<double> resolve_bandwidths(const KernelConfig& cfg, const Design& design,
                                       std::span<const double> responses, int num_responses);

// Covariate columns of a dataset as an all-observed state layout, so game
// policies and conditioning sets apply to data rows by name.
StateLayout covariate_layout(const Dataset& data);

// f(X_m) for every market, row-major.
std::vector<double> apply_policy_to_rows(const Dataset& data, const Policy& policy);

Design make_design(const Dataset& data, std::span<const int> columns,
                   const std::vector<std::string>& discrete);

struct AdpEstimate {
  std::vector<double> adp;        // per player
  std::vector<double> eb;         // share of markets mapped into C off the support
  std::vector<double> mean;       // sample mean of Y over the markets used
  std::vector<double> delta;      // adp - mean
  std::vector<double> bandwidth;  // per player
  std::vector<int> dropped;       // missing fits removed from the average
  int markets = 0;
};

// Leave-one-out kernel estimate of ADP_i(C) and EB(C). `markets` restricts
// the average (all markets when empty); the regression always uses the whole
// sample.
AdpEstimate estimate_adp(const Dataset& data, const Policy& policy, const KernelConfig& cfg,
                         const ConditioningSet& C = ConditioningSet::all(),
                         std::span<const int> markets = {});

// Kernel regression on (X1, X2) evaluated at (g(x1), x2) with support judged
// on X1 alone. The policy may not touch a control. Empty controls reduce to
// estimate_adp on the configured columns.
AdpEstimate control_function_adp(const Dataset& data, const Policy& policy,
                                 const KernelConfig& cfg,
                                 const std::vector<std::string>& controls,
                                 const ConditioningSet& C = ConditioningSet::all(),
                                 std::span<const int> markets = {});

struct OlsEffect {
  std::vector<std::string> regressors;      // "(intercept)" then covariates
  std::vector<std::vector<double>> gamma;   // per player
  std::vector<double> fitted_mean;          // mean of f(X)'gamma over the subset
  std::vector<double> mean;                 // mean of Y over the subset
  std::vector<double> delta;
};

// Least squares of every outcome on an intercept and `columns` (all
// covariates when empty), then Delta_i = mean over the subset of
// f(X)'gamma_i - mean Y_i. Rank deficiency throws Error("rank_deficient")
// naming the collinear columns.
OlsEffect ols_effect(const Dataset& data, const Policy& policy,
                     std::span<const int> markets = {},
                     const std::vector<std::string>& columns = {});

enum class Engine { kOls, kKernel };

struct Decomposition {
  std::vector<double> observable_effect;  // per player
  std::vector<double> policy_effect;
  std::vector<double> raw_difference;     // mean(Y | d = 0) - mean(Y | d = 1)
  int treated = 0;
  int control = 0;
  int dropped = 0;
};

// Splits mean(Y | d=0) - mean(Y | d=1) into a composition term and a policy
// term evaluated on the d=1 markets with d switched to 0.
Decomposition aggregate_decomposition(const Dataset& data, const std::string& dummy,
                                      Engine engine, const KernelConfig& cfg = {});

}  // namespace gamecf

#endif  // GAMECF_ESTIMATORS_HPP_
