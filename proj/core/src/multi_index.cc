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

#include "gamecf/multi_index.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gamecf/error.hpp"

namespace gamecf {
namespace {

std::string index_name(int i) { return "__index_" + std::to_string(i + 1); }

}  // namespace

MultiIndexModel multi_index_fit(const Dataset& data, const std::vector<IndexSpec>& specs,
                                const std::vector<std::string>& x1,
                                const std::vector<std::string>& discrete,
                                const MultiIndexConfig& cfg) {
  const int n = data.num_players();
  const int M = data.num_markets();
  if (static_cast<int>(specs.size()) != n) {
    throw InvalidArgument("need one index definition per player");
  }
  if (M < 3) throw InvalidArgument("multi-index fit needs at least three markets");
  std::vector<int> cols;
  auto add = [&](const std::string& name) {
    const int k = data.covariate_index(name);
    if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  };
  for (const auto& s : specs) {
    if (s.rest.empty()) throw InvalidArgument("an index needs at least two covariates");
    add(s.lead);
    for (const auto& r : s.rest) add(r);
  }
  for (const auto& name : x1) {
    for (const auto& s : specs) {
      if (s.lead == name || std::find(s.rest.begin(), s.rest.end(), name) != s.rest.end()) {
        throw InvalidArgument("covariate '" + name + "' is both in an index and in x1");
      }
    }
    add(name);
  }

  MultiIndexModel model;
  model.specs = specs;
  model.x1 = x1;
  const Design design = make_design(data, cols, discrete);
  std::vector<double> y;
  y.reserve(static_cast<std::size_t>(M) * n);
  for (int m = 0; m < M; ++m) {
    auto r = data.y_row(m);
    y.insert(y.end(), r.begin(), r.end());
  }
  model.first_stage_bandwidth =
      cfg.first_stage_bandwidth > 0.0 ? cfg.first_stage_bandwidth : rule_of_thumb_bandwidth(design);
  KernelSmoother first(design, y, n, cfg.family, model.first_stage_bandwidth);
  model.gamma_hat.assign(static_cast<std::size_t>(M) * n, 0.0);
  std::vector<char> valid(M, 1);
  for (int m = 0; m < M; ++m) {
    auto f = first.fit(design.row(m), m);
    if (!f) {
      valid[m] = 0;
      ++model.missing_first_stage;
      continue;
    }
    std::copy(f->begin(), f->end(), model.gamma_hat.begin() + static_cast<std::ptrdiff_t>(m) * n);
  }

  if (cfg.pair_bandwidth > 0.0) {
    model.pair_bandwidth = cfg.pair_bandwidth;
  } else {
    Design g;
    g.rows = M;
    g.cols = n;
    g.values = model.gamma_hat;
    g.discrete.assign(n, false);
    model.pair_bandwidth = rule_of_thumb_bandwidth(g);
  }
  const double h2 = model.pair_bandwidth;
  auto pair_weight = [&](int m, int k) {
    double w = 1.0;
    for (int i = 0; i < n && w != 0.0; ++i) {
      const double u = std::isinf(h2) ? 0.0
                                      : (model.gamma_hat[static_cast<std::size_t>(m) * n + i] -
                                         model.gamma_hat[static_cast<std::size_t>(k) * n + i]) / h2;
      w *= kernel_value(cfg.family, u);
    }
    return w;
  };

  std::vector<int> lead(n);
  std::vector<std::vector<int>> rest(n);
  std::vector<Eigen::MatrixXd> gram(n);
  std::vector<Eigen::VectorXd> cross(n);
  for (int i = 0; i < n; ++i) {
    lead[i] = data.covariate_index(specs[i].lead);
    for (const auto& r : specs[i].rest) rest[i].push_back(data.covariate_index(r));
    const int q = static_cast<int>(rest[i].size());
    gram[i] = Eigen::MatrixXd::Zero(q, q);
    cross[i] = Eigen::VectorXd::Zero(q);
  }
  // The summand is symmetric in (m, k), so each unordered pair counts once.
  Eigen::VectorXd db;
  for (int m = 0; m < M; ++m) {
    if (!valid[m]) continue;
    for (int k = m + 1; k < M; ++k) {
      if (!valid[k]) continue;
      const double w = pair_weight(m, k);
      if (w == 0.0) continue;
      for (int i = 0; i < n; ++i) {
        const int q = static_cast<int>(rest[i].size());
        db.resize(q);
        for (int c = 0; c < q; ++c) db(c) = data.x(m, rest[i][c]) - data.x(k, rest[i][c]);
        const double da = data.x(m, lead[i]) - data.x(k, lead[i]);
        gram[i].noalias() += w * db * db.transpose();
        cross[i].noalias() += w * da * db;
      }
    }
  }
  model.beta.resize(n);
  model.theta.resize(n);
  for (int i = 0; i < n; ++i) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram[i]);
    if (gram[i].size() == 0 || qr.rank() < gram[i].rows()) {
      throw Error("singular_gram", "weighted pair Gram matrix of player " + std::to_string(i + 1) +
                                       " is singular; check for duplicated index covariates");
    }
    Eigen::VectorXd b = qr.solve(cross[i]);
    model.beta[i].assign(b.data(), b.data() + b.size());
    model.theta[i] = {1.0};
    for (double v : model.beta[i]) model.theta[i].push_back(-v);
  }
  model.v.assign(static_cast<std::size_t>(M) * n, 0.0);
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < n; ++i) {
      double v = data.x(m, lead[i]);
      for (std::size_t c = 0; c < rest[i].size(); ++c) v -= data.x(m, rest[i][c]) * model.beta[i][c];
      model.v[static_cast<std::size_t>(m) * n + i] = v;
    }
  }
  return model;
}

AdpEstimate multi_index_adp(const Dataset& data, const MultiIndexModel& model,
                            const Policy& policy, const KernelConfig& cfg,
                            const ConditioningSet& C, std::span<const int> markets) {
  const int n = data.num_players();
  const int M = data.num_markets();
  if (static_cast<int>(model.v.size()) != M * n) {
    throw InvalidArgument("model was fitted on a different sample");
  }
  for (const auto& t : policy.targets()) {
    if (std::find(model.x1.begin(), model.x1.end(), t) == model.x1.end()) {
      throw InvalidArgument("policy target '" + t + "' is not an x1 covariate");
    }
  }
  std::vector<std::string> names = model.x1;
  std::vector<std::string> controls;
  for (int i = 0; i < n; ++i) {
    names.push_back(index_name(i));
    controls.push_back(index_name(i));
  }
  Dataset aug(data.y_names(), names);
  aug.reserve(M);
  std::vector<int> x1_idx;
  for (const auto& c : model.x1) x1_idx.push_back(data.covariate_index(c));
  std::vector<double> row(names.size());
  for (int m = 0; m < M; ++m) {
    for (std::size_t k = 0; k < x1_idx.size(); ++k) row[k] = data.x(m, x1_idx[k]);
    for (int i = 0; i < n; ++i) row[x1_idx.size() + i] = model.index(m, i);
    aug.add(data.market_id(m), data.y_row(m), row);
  }
  KernelConfig kc = cfg;
  kc.columns.clear();
  return control_function_adp(aug, policy, kc, controls, C, markets);
}

}  // namespace gamecf
