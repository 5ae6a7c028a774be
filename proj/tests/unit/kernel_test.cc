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
#include <random>
#include <vector>

#include "gamecf/kernel.hpp"

namespace gamecf {
namespace {

// Columns: one continuous, one discrete in {0, 1}.
Design mixed_design(const std::vector<double>& x, const std::vector<double>& d) {
  Design D;
  D.rows = static_cast<int>(x.size());
  D.cols = 2;
  D.discrete = {false, true};
  for (std::size_t r = 0; r < x.size(); ++r) {
    D.values.push_back(x[r]);
    D.values.push_back(d[r]);
  }
  return D;
}

Design continuous_design(const std::vector<double>& x) {
  Design D;
  D.rows = static_cast<int>(x.size());
  D.cols = 1;
  D.discrete = {false};
  D.values = x;
  return D;
}

TEST(KernelFunctions, IntegrateToOne) {
  for (auto f : {KernelFamily::kQuartic, KernelFamily::kEpanechnikov, KernelFamily::kGaussian}) {
    const double R = std::isfinite(kernel_radius(f)) ? kernel_radius(f) : 10.0;
    const int n = 200000;
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double u = -R + 2.0 * R * k / n;
      s += (k == 0 || k == n ? 0.5 : 1.0) * kernel_value(f, u);
    }
    EXPECT_NEAR(s * 2.0 * R / n, 1.0, 1e-8) << to_string(f);
  }
  EXPECT_DOUBLE_EQ(kernel_value(KernelFamily::kQuartic, 0.0), 15.0 / 16.0);
  EXPECT_DOUBLE_EQ(kernel_value(KernelFamily::kQuartic, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(kernel_value(KernelFamily::kQuartic, 0.5), 15.0 / 16.0 * 0.5625);
  EXPECT_EQ(kernel_family_from_string(to_string(KernelFamily::kEpanechnikov)),
            KernelFamily::kEpanechnikov);
}

TEST(KernelSmoother, MatchesBruteForceNadarayaWatson) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> x, d, y;
  for (int m = 0; m < 300; ++m) {
    x.push_back(std::round(U(gen) * 20) / 20);  // duplicates on purpose
    d.push_back(U(gen) < 0.5 ? 0.0 : 1.0);
    y.push_back(std::sin(6 * x.back()) + d.back() + U(gen));
  }
  const auto D = mixed_design(x, d);
  const double h = 0.13;
  KernelSmoother ks(D, y, 1, KernelFamily::kQuartic, h);
  for (double x0 : {0.0, 0.31, 0.5, 0.97}) {
    for (double d0 : {0.0, 1.0}) {
      double num = 0.0, den = 0.0;
      for (std::size_t m = 0; m < x.size(); ++m) {
        if (d[m] != d0) continue;
        const double k = kernel_value(KernelFamily::kQuartic, (x0 - x[m]) / h);
        num += k * y[m];
        den += k;
      }
      const std::vector<double> pt{x0, d0};
      const auto fit = ks.fit(pt);
      ASSERT_TRUE(fit.has_value());
      EXPECT_NEAR((*fit)[0], num / den, 1e-12);
      EXPECT_NEAR(ks.weight_sum(pt), den, 1e-10);
    }
  }
}

TEST(KernelSmoother, LeaveOneOutEqualsRefitWithoutTheRow) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> x, d, y;
  for (int m = 0; m < 120; ++m) {
    x.push_back(std::round(U(gen) * 10) / 10);
    d.push_back(m % 3 == 0 ? 1.0 : 0.0);
    y.push_back(x.back() * x.back() + U(gen));
  }
  const auto D = mixed_design(x, d);
  KernelSmoother full(D, y, 1, KernelFamily::kQuartic, 0.25);
  for (int m = 0; m < 120; m += 7) {
    std::vector<double> xr = x, dr = d, yr = y;
    xr.erase(xr.begin() + m);
    dr.erase(dr.begin() + m);
    yr.erase(yr.begin() + m);
    KernelSmoother refit(mixed_design(xr, dr), yr, 1, KernelFamily::kQuartic, 0.25);
    const std::vector<double> pt{x[m], d[m]};
    const auto a = full.fit(pt, m);
    const auto b = refit.fit(pt);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_NEAR((*a)[0], (*b)[0], 1e-12) << "row " << m;
    }
  }
}

TEST(KernelSmoother, ConstantResponseAndMissingCells) {
  const auto D = mixed_design({0.0, 0.5, 1.0}, {0.0, 0.0, 0.0});
  const std::vector<double> y{2.5, 2.5, 2.5};
  KernelSmoother ks(D, y, 1, KernelFamily::kEpanechnikov, 0.6);
  EXPECT_DOUBLE_EQ((*ks.fit(std::vector<double>{0.25, 0.0}))[0], 2.5);
  // Unseen discrete cell and a point beyond every kernel window.
  EXPECT_FALSE(ks.fit(std::vector<double>{0.25, 1.0}).has_value());
  EXPECT_FALSE(ks.fit(std::vector<double>{5.0, 0.0}).has_value());
  EXPECT_EQ(ks.weight_sum(std::vector<double>{5.0, 0.0}), 0.0);
  // A lone observation has no leave-one-out neighbours once excluded.
  const auto lone = mixed_design({0.0, 3.0}, {0.0, 0.0});
  KernelSmoother ks2(lone, std::vector<double>{1.0, 2.0}, 1, KernelFamily::kQuartic, 0.5);
  EXPECT_FALSE(ks2.fit(std::vector<double>{3.0, 0.0}, 1).has_value());
}

TEST(KernelSmoother, SupportRule) {
  const auto D = mixed_design({0.0, 1.0}, {0.0, 1.0});
  KernelSmoother ks(D, std::vector<double>{0.0, 1.0}, 1, KernelFamily::kQuartic, 0.2);
  EXPECT_TRUE(ks.in_support(std::vector<double>{0.2, 0.0}));
  EXPECT_FALSE(ks.in_support(std::vector<double>{0.21, 0.0}));
  EXPECT_FALSE(ks.in_support(std::vector<double>{0.0, 1.0}));
}

TEST(Bandwidth, RuleOfThumbFormula) {
  const auto D = continuous_design({0.0, 1.0, 2.0, 3.0});
  // Sample sd of {0, 1, 2, 3} is sqrt(5/3).
  EXPECT_NEAR(rule_of_thumb_bandwidth(D), 1.06 * std::sqrt(5.0 / 3.0) * std::pow(4.0, -0.2),
              1e-12);
  const auto grid = default_bandwidth_grid(D, 5, 0.5, 2.0);
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_NEAR(grid.front(), 0.5 * rule_of_thumb_bandwidth(D), 1e-12);
  EXPECT_NEAR(grid.back(), 2.0 * rule_of_thumb_bandwidth(D), 1e-12);
  EXPECT_NEAR(grid[2] * grid[2], grid[1] * grid[3], 1e-12);
}

TEST(CrossValidation, SingleBandwidthIsReturned) {
  const auto D = continuous_design({0.0, 0.1, 0.2, 0.3});
  const std::vector<double> y{1, 2, 3, 4};
  const auto cv = cross_validate(D, y, 1, 0, KernelFamily::kQuartic, {0.35});
  EXPECT_EQ(cv.bandwidth, 0.35);
  ASSERT_EQ(cv.score.size(), 1u);
}

TEST(CrossValidation, NoiseFavoursWideAndSignalFavoursInterior) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> x, noise, signal;
  for (int m = 0; m < 400; ++m) {
    x.push_back(U(gen));
    noise.push_back(N(gen));
    signal.push_back(std::sin(2 * M_PI * x.back()) + 0.3 * N(gen));
  }
  const auto D = continuous_design(x);
  const std::vector<double> grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 3.0};
  const auto flat = cross_validate(D, noise, 1, 0, KernelFamily::kQuartic, grid);
  EXPECT_LE(flat.score.back(), flat.score.front());
  const auto wavy = cross_validate(D, signal, 1, 0, KernelFamily::kQuartic, grid);
  EXPECT_GT(wavy.bandwidth, grid.front());
  EXPECT_LT(wavy.bandwidth, grid.back());
}

TEST(KernelSmoother, ErrorShrinksWithSampleSize) {
  auto mse = [](int M) {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, 0.3);
    std::vector<double> x, y;
    for (int m = 0; m < M; ++m) {
      x.push_back(U(gen));
      y.push_back(x.back() * x.back() + N(gen));
    }
    const auto D = continuous_design(x);
    KernelSmoother ks(D, y, 1, KernelFamily::kQuartic, rule_of_thumb_bandwidth(D));
    double s = 0.0;
    for (int k = 1; k < 50; ++k) {
      const double x0 = k / 50.0;
      const double e = (*ks.fit(std::vector<double>{x0}))[0] - x0 * x0;
      s += e * e;
    }
    return s / 49;
  };
  EXPECT_LT(mse(5000), mse(200));
}

}  // namespace
}  // namespace gamecf
