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


#ifndef GAMECF_BOOTSTRAP_HPP_
#define GAMECF_BOOTSTRAP_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gamecf/dataset.hpp"

namespace gamecf {

struct BootstrapConfig {
  int replications = 999;
  std::uint64_t seed = 0;
  // Abort when more than this share of resamples fail.
  double max_failure_share = 0.10;
};

// Maps a dataset to a vector of targets. Throwing, or returning a vector of
// the wrong length or with non-finite entries, counts as a failed resample.
using Statistic = std::function<std::vector<double>(const Dataset&)>;

struct BootstrapResult {
  std::vector<double> estimate;  // statistic on the original sample
  std::vector<double> se;        // interquartile-range standard error
  int replications = 0;
  int failures = 0;
};

// Type-7 (linear interpolation) sample quantile of unsorted values.
double quantile(std::vector<double> values, double p);

// (q75 - q25) / (z75 - z25) of each target across market resamples drawn with
// replacement. Replicate b uses the counter stream (seed, b), so results do
// not depend on the thread count. Throws Error("bootstrap_failed") when too
// many resamples fail.
BootstrapResult bootstrap_se(const Dataset& data, const Statistic& statistic,
                             const BootstrapConfig& cfg);

}  // namespace gamecf

#endif  // GAMECF_BOOTSTRAP_HPP_
