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

#ifndef GAMECF_KERNEL_HPP_
#define GAMECF_KERNEL_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gamecf {

enum class KernelFamily { kQuartic, kEpanechnikov, kGaussian };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// One-dimensional kernel k(u); the quartic (biweight) kernel is
// 15/16 (1 - u^2)^2 on |u| <= 1.
double kernel_value(KernelFamily family, double u);
// Half-width of the kernel support (infinity for the Gaussian).
double kernel_radius(KernelFamily family);

// Covariate matrix with a discrete/continuous flag per column. Row-major.
struct Design {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
  std::vector<bool> discrete;

  double operator()(int r, int c) const {
    return values[static_cast<std::size_t>(r) * cols + c];
  }
  std::span<const double> row(int r) const {
    return {values.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
};

// Nadaraya-Watson regression of several responses on a Design, with exact
// matching on discrete columns and a product kernel K((x - X_k) / h) on
// continuous ones. Identical covariate rows are pooled, which makes
// leave-one-out fits exact removals of one observation.
class KernelSmoother {
 public:
  // responses is rows x num_responses, row-major.
  KernelSmoother(const Design& design, std::span<const double> responses,
                 int num_responses, KernelFamily family, double bandwidth);

  int num_responses() const { return num_responses_; }
  double bandwidth() const { return bandwidth_; }

  // Fit at x, optionally leaving out observation `exclude`. Empty when the
  // effective kernel weight is zero (flagged missing).
  std::optional<std::vector<double>> fit(std::span<const double> x, int exclude = -1) const;

  // Sum of kernel weights at x (after the optional exclusion).
  double weight_sum(std::span<const double> x, int exclude = -1) const;

  // Estimated-support rule: the discrete part must occur in the data and the
  // nearest data point, in bandwidth-scaled Euclidean distance over the
  // continuous part, must lie within 1.
  bool in_support(std::span<const double> x) const;

 private:
  struct Pattern {
    std::vector<double> x;
    int count = 0;
    std::vector<double> sum;
  };
  struct Group {
    std::vector<int> patterns;  // sorted by the first continuous coordinate
    std::vector<double> keys;
  };

  template <typename Visit>
  void visit_neighbors(std::span<const double> x, double radius, Visit&& visit) const;
  const Group* group_of(std::span<const double> x) const;
  double weight(std::span<const double> x, const Pattern& p) const;

  Design design_;
  std::vector<double> responses_;
  int num_responses_;
  KernelFamily family_;
  double bandwidth_;
  std::vector<int> cont_;
  std::vector<int> disc_;
  std::vector<Pattern> patterns_;
  std::vector<int> pattern_of_row_;
  std::vector<std::vector<double>> group_keys_;
  std::vector<Group> groups_;
};

// 1.06 sigma M^(-1/(4+d)) with sigma the mean standard deviation of the
// continuous columns (1 when there are none).
double rule_of_thumb_bandwidth(const Design& design);

// `points` log-spaced bandwidths over [lo, hi] times the rule of thumb.
std::vector<double> default_bandwidth_grid(const Design& design, int points = 10,
                                           double lo = 0.25, double hi = 4.0);

struct CrossValidation {
  double bandwidth = 0.0;
  std::vector<double> grid;
  std::vector<double> score;  // CV(h) per grid point
  std::vector<int> missing;   // missing leave-one-out fits per grid point
};

// Minimizes CV(h) = M^-1 sum_m (Y_m - mu_hat_{-m}(X_m))^2 for response
// `response`. Missing leave-one-out fits are scored against the
// leave-one-out grand mean. Ties go to the smallest bandwidth. Throws when
// every bandwidth leaves every fit missing.
CrossValidation cross_validate(const Design& design, std::span<const double> responses,
                               int num_responses, int response, KernelFamily family,
                               std::vector<double> grid);

}  // namespace gamecf

#endif  // GAMECF_KERNEL_HPP_
