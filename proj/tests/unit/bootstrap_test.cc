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
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <vector>

#include "gamecf/bootstrap.hpp"
#include "gamecf/error.hpp"

namespace gamecf {
namespace {

Dataset gaussian_sample(int M, double sigma, std::uint64_t seed) {
  Dataset data({"y_1"}, {"x_0_1"});
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> N(0.0, sigma);
  for (int m = 0; m < M; ++m) data.add(m + 1, std::vector<double>{N(gen)}, std::vector<double>{0.0});
  return data;
}

std::vector<double> sample_mean(const Dataset& d) {
  double s = 0.0;
  for (int m = 0; m < d.num_markets(); ++m) s += d.y(m, 0);
  return {s / d.num_markets()};
}

TEST(Quantile, TypeSevenInterpolation) {
  const std::vector<double> v{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(v, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile({7.0}, 0.3), 7.0);
}

TEST(Bootstrap, DegenerateStatisticHasZeroSe) {
  Dataset data({"y_1"}, {"x_0_1"});
  for (int m = 0; m < 50; ++m) data.add(m + 1, std::vector<double>{3.0}, std::vector<double>{1.0});
  const auto r = bootstrap_se(data, sample_mean, {99, 1, 0.1});
  EXPECT_EQ(r.estimate[0], 3.0);
  EXPECT_EQ(r.se[0], 0.0);
  EXPECT_EQ(r.failures, 0);
  EXPECT_EQ(r.replications, 99);
}

TEST(Bootstrap, DeterministicAcrossRunsAndThreadCounts) {
  const auto data = gaussian_sample(500, 1.0, 2);
  ::setenv("GAMECF_THREADS", "1", 1);
  const auto a = bootstrap_se(data, sample_mean, {199, 9, 0.1});
  ::setenv("GAMECF_THREADS", "3", 1);
  const auto b = bootstrap_se(data, sample_mean, {199, 9, 0.1});
  ::unsetenv("GAMECF_THREADS");
  EXPECT_EQ(a.se, b.se);
  const auto c = bootstrap_se(data, sample_mean, {199, 10, 0.1});
  EXPECT_NE(a.se, c.se);
}

TEST(Bootstrap, SeScalesWithRootM) {
  const double small = bootstrap_se(gaussian_sample(2000, 1.0, 3), sample_mean, {999, 4, 0.1}).se[0];
  const double large = bootstrap_se(gaussian_sample(8000, 1.0, 5), sample_mean, {999, 6, 0.1}).se[0];
  EXPECT_NEAR(small / large, 2.0, 0.4);
  EXPECT_NEAR(small, 1.0 / std::sqrt(2000.0), 0.15 / std::sqrt(2000.0));
}

TEST(Bootstrap, FailedResamplesAreCountedThenFatal) {
  const auto data = gaussian_sample(200, 1.0, 7);
  // The last drawn market is uniform over ids, so these fail about 5% and
  // 50% of the time; the original sample (last id 200) always succeeds.
  auto rare = [](const Dataset& d) {
    if (d.market_id(d.num_markets() - 1) <= 10) throw std::runtime_error("rare");
    return sample_mean(d);
  };
  const auto r = bootstrap_se(data, rare, {399, 8, 0.1});
  EXPECT_GT(r.failures, 0);
  EXPECT_LT(r.failures, 40);
  auto often = [](const Dataset& d) {
    if (d.market_id(d.num_markets() - 1) <= 100) return std::vector<double>{NAN};
    return sample_mean(d);
  };
  try {
    bootstrap_se(data, often, {199, 8, 0.1});
    FAIL() << "expected bootstrap_failed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "bootstrap_failed");
  }
}

}  // namespace
}  // namespace gamecf
