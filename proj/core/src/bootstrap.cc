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

#include "gamecf/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "gamecf/error.hpp"
#include "gamecf/normal.hpp"
#include "gamecf/parallel.hpp"
#include "gamecf/rng.hpp"

namespace gamecf {

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BootstrapResult bootstrap_se(const Dataset& data, const Statistic& statistic,
                             const BootstrapConfig& cfg) {
  if (cfg.replications < 2) throw InvalidArgument("bootstrap needs at least two replications");
  const int M = data.num_markets();
  if (M < 1) throw InvalidArgument("bootstrap of an empty dataset");
  BootstrapResult out;
  out.estimate = statistic(data);
  out.replications = cfg.replications;
  const std::size_t T = out.estimate.size();

  std::vector<std::optional<std::vector<double>>> draws(cfg.replications);
  parallel_for(cfg.replications, [&](int b) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(b));
    std::vector<int> idx(M);
    for (int& k : idx) k = static_cast<int>(rng.below(static_cast<std::uint64_t>(M)));
    try {
      auto v = statistic(data.subset(idx));
      if (v.size() != T) return;
      for (double x : v) {
        if (!std::isfinite(x)) return;
      }
      draws[b] = std::move(v);
    } catch (const std::exception&) {
    }
  });
  std::vector<std::vector<double>> per_target(T);
  for (const auto& d : draws) {
    if (!d) {
      ++out.failures;
      continue;
    }
    for (std::size_t t = 0; t < T; ++t) per_target[t].push_back((*d)[t]);
  }
  if (out.failures > cfg.max_failure_share * cfg.replications || out.failures == cfg.replications) {
    throw Error("bootstrap_failed", std::to_string(out.failures) + " of " +
                                        std::to_string(cfg.replications) +
                                        " resamples failed to produce the statistic");
  }
  out.se.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    out.se[t] = (quantile(per_target[t], 0.75) - quantile(per_target[t], 0.25)) /
                kNormalQuartileSpread;
  }
  return out;
}

}  // namespace gamecf
