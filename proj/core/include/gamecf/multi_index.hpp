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


#ifndef GAMECF_MULTI_INDEX_HPP_
#define GAMECF_MULTI_INDEX_HPP_

#include <span>
#include <string>
#include <vector>

#include "gamecf/dataset.hpp"
#include "gamecf/estimators.hpp"

namespace gamecf {

// Index V_i = X_{i,a} - X_{i,b}' beta_i for one player; the coefficient on
// `lead` is normalized to 1.
struct IndexSpec {
  std::string lead;
  std::vector<std::string> rest;
};

struct MultiIndexConfig {
  KernelFamily family = KernelFamily::kQuartic;
  // First-stage leave-one-out regression bandwidth; <= 0 uses the rule of
  // thumb on the first-stage design.
  double first_stage_bandwidth = 0.0;
  // Bandwidth of the pair weights on fitted first-stage values; <= 0 uses
  // the rule of thumb, +infinity gives equal weights.
  double pair_bandwidth = 0.0;
};

struct MultiIndexModel {
  std::vector<IndexSpec> specs;            // per player
  std::vector<std::string> x1;             // covariates outside every index
  std::vector<std::vector<double>> beta;   // per player, matches specs[i].rest
  std::vector<std::vector<double>> theta;  // (1, -beta)
  std::vector<double> v;                   // markets x players, row-major
  std::vector<double> gamma_hat;           // first-stage fits, markets x players
  double first_stage_bandwidth = 0.0;
  double pair_bandwidth = 0.0;
  int missing_first_stage = 0;

  double index(int m, int i) const { return v[static_cast<std::size_t>(m) * specs.size() + i]; }
};

// Weighted pairwise-differencing estimate of every beta_i. The first stage
// regresses Y on all index covariates plus x1 with a leave-one-out kernel.
// Throws Error("singular_gram") when a weighted Gram matrix is singular.
MultiIndexModel multi_index_fit(const Dataset& data, const std::vector<IndexSpec>& specs,
                                const std::vector<std::string>& x1,
                                const std::vector<std::string>& discrete,
                                const MultiIndexConfig& cfg = {});

// Kernel regression on (V_hat, X1) evaluated at (V_hat_m, g(X1_m)), support
// and conditioning judged on g(X1_m). The policy may only alter x1.
AdpEstimate multi_index_adp(const Dataset& data, const MultiIndexModel& model,
                            const Policy& policy, const KernelConfig& cfg,
                            const ConditioningSet& C = ConditioningSet::all(),
                            std::span<const int> markets = {});

}  // namespace gamecf

#endif  // GAMECF_MULTI_INDEX_HPP_
