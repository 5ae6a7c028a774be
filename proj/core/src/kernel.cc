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

#include "gamecf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "gamecf/error.hpp"
#include "gamecf/parallel.hpp"

namespace gamecf {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::kQuartic:
      return "quartic";
    case KernelFamily::kEpanechnikov:
      return "epanechnikov";
    case KernelFamily::kGaussian:
      return "gaussian";
  }
  return "?";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "quartic") return KernelFamily::kQuartic;
  if (name == "epanechnikov") return KernelFamily::kEpanechnikov;
  if (name == "gaussian") return KernelFamily::kGaussian;
  throw InvalidArgument("unknown kernel '" + name + "'");
}

double kernel_value(KernelFamily family, double u) {
  switch (family) {
    case KernelFamily::kQuartic: {
      if (std::abs(u) > 1.0) return 0.0;
      const double t = 1.0 - u * u;
      return 15.0 / 16.0 * t * t;
    }
    case KernelFamily::kEpanechnikov:
      return std::abs(u) > 1.0 ? 0.0 : 0.75 * (1.0 - u * u);
    case KernelFamily::kGaussian:
      return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
  }
  return 0.0;
}

double kernel_radius(KernelFamily family) {
  return family == KernelFamily::kGaussian ? std::numeric_limits<double>::infinity() : 1.0;
}

KernelSmoother::KernelSmoother(const Design& design, std::span<const double> responses,
                               int num_responses, KernelFamily family, double bandwidth)
    : design_(design),
      responses_(responses.begin(), responses.end()),
      num_responses_(num_responses),
      family_(family),
      bandwidth_(bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidArgument("bandwidth must be positive and finite");
  }
  if (static_cast<int>(design.discrete.size()) != design.cols ||
      design.values.size() != static_cast<std::size_t>(design.rows) * design.cols) {
    throw InvalidArgument("malformed design matrix");
  }
  if (num_responses < 1 ||
      responses.size() != static_cast<std::size_t>(design.rows) * num_responses) {
    throw InvalidArgument("response matrix does not match the design");
  }
  for (int c = 0; c < design.cols; ++c) (design.discrete[c] ? disc_ : cont_).push_back(c);

  std::map<std::vector<double>, int> index;
  pattern_of_row_.resize(design.rows);
  // Patterns are numbered in lexicographic order of their covariates so that
  // dropping a row never reorders the remaining ones.
  for (int r = 0; r < design.rows; ++r) {
    auto row = design.row(r);
    index.emplace(std::vector<double>(row.begin(), row.end()), 0);
  }
  for (auto& [x, id] : index) {
    id = static_cast<int>(patterns_.size());
    patterns_.push_back({x, 0, std::vector<double>(num_responses, 0.0)});
  }
  for (int r = 0; r < design.rows; ++r) {
    auto row = design.row(r);
    const int p = index.at(std::vector<double>(row.begin(), row.end()));
    pattern_of_row_[r] = p;
    ++patterns_[p].count;
    for (int j = 0; j < num_responses; ++j) {
      patterns_[p].sum[j] += responses_[static_cast<std::size_t>(r) * num_responses + j];
    }
  }
  std::map<std::vector<double>, Group> groups;
  for (int p = 0; p < static_cast<int>(patterns_.size()); ++p) {
    std::vector<double> key;
    for (int c : disc_) key.push_back(patterns_[p].x[c]);
    groups[std::move(key)].patterns.push_back(p);
  }
  for (auto& [key, g] : groups) {
    group_keys_.push_back(key);
    groups_.push_back(std::move(g));
  }
  for (auto& g : groups_) {
    if (!cont_.empty()) {
      const int c0 = cont_[0];
      std::stable_sort(g.patterns.begin(), g.patterns.end(), [&](int a, int b) {
        return patterns_[a].x[c0] < patterns_[b].x[c0];
      });
      for (int p : g.patterns) g.keys.push_back(patterns_[p].x[c0]);
    }
  }
}

const KernelSmoother::Group* KernelSmoother::group_of(std::span<const double> x) const {
  std::vector<double> key;
  for (int c : disc_) key.push_back(x[c]);
  auto it = std::lower_bound(group_keys_.begin(), group_keys_.end(), key);
  if (it == group_keys_.end() || *it != key) return nullptr;
  return &groups_[it - group_keys_.begin()];
}

template <typename Visit>
void KernelSmoother::visit_neighbors(std::span<const double> x, double radius,
                                     Visit&& visit) const {
  const Group* g = group_of(x);
  if (!g) return;
  if (cont_.empty() || !std::isfinite(radius)) {
    for (int p : g->patterns) visit(patterns_[p], p);
    return;
  }
  const double x0 = x[cont_[0]];
  auto lo = std::lower_bound(g->keys.begin(), g->keys.end(), x0 - radius);
  auto hi = std::upper_bound(g->keys.begin(), g->keys.end(), x0 + radius);
  for (auto it = lo; it != hi; ++it) {
    const int p = g->patterns[it - g->keys.begin()];
    visit(patterns_[p], p);
  }
}

double KernelSmoother::weight(std::span<const double> x, const Pattern& p) const {
  double k = 1.0;
  for (int c : cont_) {
    k *= kernel_value(family_, (x[c] - p.x[c]) / bandwidth_);
    if (k == 0.0) break;
  }
  return k;
}

std::optional<std::vector<double>> KernelSmoother::fit(std::span<const double> x,
                                                       int exclude) const {
  if (static_cast<int>(x.size()) != design_.cols) {
    throw InvalidArgument("query width does not match the design");
  }
  const int skip = exclude >= 0 ? pattern_of_row_.at(exclude) : -1;
  std::vector<double> num(num_responses_, 0.0);
  double den = 0.0;
  visit_neighbors(x, kernel_radius(family_) * bandwidth_, [&](const Pattern& p, int id) {
    const double k = weight(x, p);
    if (k == 0.0) return;
    if (id == skip) {
      den += k * (p.count - 1);
      for (int j = 0; j < num_responses_; ++j) {
        num[j] += k * (p.sum[j] - responses_[static_cast<std::size_t>(exclude) * num_responses_ + j]);
      }
    } else {
      den += k * p.count;
      for (int j = 0; j < num_responses_; ++j) num[j] += k * p.sum[j];
    }
  });
  if (!(den > 0.0)) return std::nullopt;
  for (double& v : num) v /= den;
  return num;
}

double KernelSmoother::weight_sum(std::span<const double> x, int exclude) const {
  const int skip = exclude >= 0 ? pattern_of_row_.at(exclude) : -1;
  double den = 0.0;
  visit_neighbors(x, kernel_radius(family_) * bandwidth_, [&](const Pattern& p, int id) {
    den += weight(x, p) * (id == skip ? p.count - 1 : p.count);
  });
  return den;
}

bool KernelSmoother::in_support(std::span<const double> x) const {
  const Group* g = group_of(x);
  if (!g) return false;
  if (cont_.empty()) return true;
  bool found = false;
  visit_neighbors(x, bandwidth_, [&](const Pattern& p, int) {
    if (found) return;
    double d2 = 0.0;
    for (int c : cont_) {
      const double u = (x[c] - p.x[c]) / bandwidth_;
      d2 += u * u;
    }
    found = d2 <= 1.0 + 1e-12;
  });
  return found;
}

double rule_of_thumb_bandwidth(const Design& design) {
  int d = 0;
  double sigma = 0.0;
  for (int c = 0; c < design.cols; ++c) {
    if (design.discrete[c]) continue;
    ++d;
    double mean = 0.0;
    for (int r = 0; r < design.rows; ++r) mean += design(r, c);
    mean /= design.rows;
    double var = 0.0;
    for (int r = 0; r < design.rows; ++r) var += (design(r, c) - mean) * (design(r, c) - mean);
    sigma += std::sqrt(var / std::max(1, design.rows - 1));
  }
  if (d == 0) return 1.0;
  sigma /= d;
  if (!(sigma > 0.0)) sigma = 1.0;
  return 1.06 * sigma * std::pow(static_cast<double>(design.rows), -1.0 / (4.0 + d));
}

std::vector<double> default_bandwidth_grid(const Design& design, int points, double lo,
                                           double hi) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("bad bandwidth grid");
  const double base = rule_of_thumb_bandwidth(design);
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    grid[k] = base * std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  return grid;
}

CrossValidation cross_validate(const Design& design, std::span<const double> responses,
                               int num_responses, int response, KernelFamily family,
                               std::vector<double> grid) {
  if (grid.empty()) throw InvalidArgument("bandwidth grid is empty");
  if (response < 0 || response >= num_responses) throw InvalidArgument("response out of range");
  const int M = design.rows;
  if (M < 2) throw InvalidArgument("cross-validation needs at least two observations");
  CrossValidation cv;
  cv.grid = grid;
  cv.score.assign(grid.size(), 0.0);
  cv.missing.assign(grid.size(), 0);
  double total = 0.0;
  for (int m = 0; m < M; ++m) total += responses[static_cast<std::size_t>(m) * num_responses + response];
  parallel_for(static_cast<int>(grid.size()), [&](int g) {
    KernelSmoother s(design, responses, num_responses, family, grid[g]);
    double sse = 0.0;
    for (int m = 0; m < M; ++m) {
      const double y = responses[static_cast<std::size_t>(m) * num_responses + response];
      auto f = s.fit(design.row(m), m);
      double pred;
      if (f) {
        pred = (*f)[response];
      } else {
        ++cv.missing[g];
        pred = (total - y) / (M - 1);
      }
      sse += (y - pred) * (y - pred);
    }
    cv.score[g] = sse / M;
  });
  int best = -1;
  for (int g = 0; g < static_cast<int>(grid.size()); ++g) {
    if (cv.missing[g] == M) continue;
    if (best < 0 || cv.score[g] < cv.score[best] ||
        (cv.score[g] == cv.score[best] && grid[g] < grid[best])) {
      best = g;
    }
  }
  if (best < 0) throw Error("cv_failed", "every bandwidth leaves every fit missing");
  cv.bandwidth = grid[best];
  return cv;
}

}  // namespace gamecf
