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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gamecf/error.hpp"
#include "gamecf/multi_index.hpp"

namespace gamecf {
namespace {

// Y = a - beta b + noise, plus a binary market covariate w.
Dataset index_sample(int M, double beta, std::uint64_t seed) {
  Dataset data({"y_1"}, {"a", "b", "w"});
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int m = 0; m < M; ++m) {
    const double a = N(gen);
    const double b = N(gen);
    const double w = m % 2;
    data.add(m + 1, std::vector<double>{a - beta * b + 0.2 * w + 0.1 * N(gen)},
             std::vector<double>{a, b, w});
  }
  return data;
}

TEST(MultiIndex, EqualPairWeightsMatchTheDoubleLoop) {
  const auto data = index_sample(150, 0.5, 1);
  MultiIndexConfig cfg;
  cfg.first_stage_bandwidth = 3.0;  // wide enough that no leave-one-out fit is missing
  cfg.pair_bandwidth = std::numeric_limits<double>::infinity();
  const auto model = multi_index_fit(data, {{"a", {"b"}}}, {}, {}, cfg);
  ASSERT_EQ(model.missing_first_stage, 0);
  double sbb = 0.0, sba = 0.0;
  for (int m = 0; m < data.num_markets(); ++m) {
    for (int k = 0; k < data.num_markets(); ++k) {
      const double db = data.x(m, 1) - data.x(k, 1);
      sbb += db * db;
      sba += db * (data.x(m, 0) - data.x(k, 0));
    }
  }
  EXPECT_NEAR(model.beta[0][0], sba / sbb, 1e-10);
  EXPECT_EQ(model.theta[0], (std::vector<double>{1.0, -model.beta[0][0]}));
  EXPECT_NEAR(model.index(7, 0), data.x(7, 0) - model.beta[0][0] * data.x(7, 1), 1e-15);
}

TEST(MultiIndex, RecoversTheIndexCoefficient) {
  const auto data = index_sample(800, -1.0, 2);
  const auto model = multi_index_fit(data, {{"a", {"b"}}}, {"w"}, {"w"});
  EXPECT_NEAR(model.beta[0][0], -1.0, 0.1);
  EXPECT_GT(model.first_stage_bandwidth, 0.0);
  EXPECT_GT(model.pair_bandwidth, 0.0);
}

TEST(MultiIndex, DuplicatedCovariatesGiveASingularGram) {
  Dataset data({"y_1"}, {"a", "b", "b_copy"});
  std::mt19937_64 gen(3);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int m = 0; m < 60; ++m) {
    const double a = N(gen);
    const double b = N(gen);
    data.add(m + 1, std::vector<double>{a - b}, std::vector<double>{a, b, b});
  }
  MultiIndexConfig cfg;
  cfg.pair_bandwidth = std::numeric_limits<double>::infinity();
  try {
    multi_index_fit(data, {{"a", {"b", "b_copy"}}}, {}, {}, cfg);
    FAIL() << "expected singular_gram";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "singular_gram");
  }
}

TEST(MultiIndex, RejectsOverlappingIndexAndX1) {
  const auto data = index_sample(30, 0.5, 4);
  EXPECT_THROW(multi_index_fit(data, {{"a", {"b"}}}, {"b"}, {}), Error);
  EXPECT_THROW(multi_index_fit(data, {{"a", {}}}, {}, {}), Error);
}

TEST(MultiIndex, AdpOnX1Policies) {
  const auto data = index_sample(400, 0.5, 5);
  const auto model = multi_index_fit(data, {{"a", {"b"}}}, {"w"}, {"w"});
  KernelConfig cfg;
  cfg.discrete = {"w"};
  cfg.bandwidth = 0.3;
  // Moving w off its support leaves nothing to extrapolate from.
  const auto off = multi_index_adp(data, model, Policy::set_constant("w", 5.0), cfg);
  EXPECT_EQ(off.eb[0], 1.0);
  EXPECT_EQ(off.adp[0], 0.0);
  // Switching w off removes the 0.2 w shift on half the markets.
  const auto on = multi_index_adp(data, model, Policy::set_constant("w", 0.0), cfg);
  EXPECT_EQ(on.eb[0], 0.0);
  EXPECT_NEAR(on.delta[0], -0.1, 0.05);
  EXPECT_THROW(multi_index_adp(data, model, Policy::set_constant("a", 0.0), cfg), Error);
}

}  // namespace
}  // namespace gamecf
