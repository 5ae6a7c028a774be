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

#include "gamecf/estimators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

#include "gamecf/error.hpp"

namespace gamecf {
namespace {

std::vector<int> resolve_columns(const Dataset& data, const std::vector<std::string>& names) {
  std::vector<int> cols;
  if (names.empty()) {
    cols.resize(data.num_covariates());
    std::iota(cols.begin(), cols.end(), 0);
    return cols;
  }
  for (const auto& n : names) cols.push_back(data.covariate_index(n));
  return cols;
}

std::vector<int> all_markets(const Dataset& data, std::span<const int> markets) {
  if (!markets.empty()) {
    for (int m : markets) {
      if (m < 0 || m >= data.num_markets()) throw InvalidArgument("market index out of range");
    }
    return {markets.begin(), markets.end()};
  }
  std::vector<int> all(data.num_markets());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::vector<double> outcome_matrix(const Dataset& data) {
  std::vector<double> y;
  y.reserve(static_cast<std::size_t>(data.num_markets()) * data.num_players());
  for (int m = 0; m < data.num_markets(); ++m) {
    auto r = data.y_row(m);
    y.insert(y.end(), r.begin(), r.end());
  }
  return y;
}

Design restrict(const Design& d, std::span<const int> cols) {
  Design out;
  out.rows = d.rows;
  out.cols = static_cast<int>(cols.size());
  out.values.reserve(static_cast<std::size_t>(out.rows) * out.cols);
  for (int r = 0; r < d.rows; ++r) {
    for (int c : cols) out.values.push_back(d(r, c));
  }
  for (int c : cols) out.discrete.push_back(d.discrete[c]);
  return out;
}

// Training design, per-market query points in the same columns, the subset
// of those columns that defines the support, and C evaluated on f(X_m).
struct KernelProblem {
  Design fit;
  std::vector<double> query;
  std::vector<int> support_cols;
  std::vector<char> in_c;
};

AdpEstimate run_kernel_adp(const Dataset& data, const KernelProblem& pb,
                           const KernelConfig& cfg, std::span<const int> markets) {
  const int n = data.num_players();
  const int M = data.num_markets();
  if (M < 2) throw InvalidArgument("kernel estimation needs at least two markets");
  const auto used = all_markets(data, markets);
  const auto y = outcome_matrix(data);
  const bool full_support = static_cast<int>(pb.support_cols.size()) == pb.fit.cols;
  const Design support_design = full_support ? Design{} : restrict(pb.fit, pb.support_cols);

  AdpEstimate est;
  est.markets = static_cast<int>(used.size());
  est.adp.assign(n, 0.0);
  est.eb.assign(n, 0.0);
  est.mean.assign(n, 0.0);
  est.delta.assign(n, 0.0);
  est.bandwidth = resolve_bandwidths(cfg, pb.fit, y, n);
  est.dropped.assign(n, 0);

  std::map<double, std::unique_ptr<KernelSmoother>> fits;
  std::map<double, std::unique_ptr<KernelSmoother>> supports;
  std::vector<double> sub(pb.support_cols.size());
  for (int i = 0; i < n; ++i) {
    const double h = est.bandwidth[i];
    auto& f = fits[h];
    if (!f) f = std::make_unique<KernelSmoother>(pb.fit, y, n, cfg.family, h);
    const KernelSmoother* s = f.get();
    if (!full_support) {
      auto& sp = supports[h];
      if (!sp) sp = std::make_unique<KernelSmoother>(support_design, y, n, cfg.family, h);
      s = sp.get();
    }
    double sum = 0.0;
    int off = 0;
    for (int m : used) {
      std::span<const double> q(pb.query.data() + static_cast<std::size_t>(m) * pb.fit.cols,
                                static_cast<std::size_t>(pb.fit.cols));
      if (!pb.in_c[m]) continue;
      bool inside;
      if (full_support) {
        inside = s->in_support(q);
      } else {
        for (std::size_t k = 0; k < sub.size(); ++k) sub[k] = q[pb.support_cols[k]];
        inside = s->in_support(sub);
      }
      if (!inside) {
        ++off;
        continue;
      }
      auto v = f->fit(q, m);
      if (!v) {
        ++est.dropped[i];
        continue;
      }
      sum += (*v)[i];
    }
    const int kept = est.markets - est.dropped[i];
    est.adp[i] = kept > 0 ? sum / kept : 0.0;
    est.eb[i] = static_cast<double>(off) / est.markets;
    for (int m : used) est.mean[i] += data.y(m, i);
    est.mean[i] /= est.markets;
    est.delta[i] = est.adp[i] - est.mean[i];
  }
  return est;
}

std::vector<char> conditioning_flags(const Dataset& data, const StateLayout& layout,
                                     const std::vector<double>& post,
                                     const ConditioningSet& C) {
  const int K = data.num_covariates();
  std::vector<char> flags(data.num_markets());
  for (int m = 0; m < data.num_markets(); ++m) {
    flags[m] = C(layout, std::span<const double>(post.data() + static_cast<std::size_t>(m) * K,
                                                 static_cast<std::size_t>(K)));
  }
  return flags;
}

std::vector<double> gather(const std::vector<double>& rows, int width, std::span<const int> cols) {
  const std::size_t M = width == 0 ? 0 : rows.size() / width;
  std::vector<double> out;
  out.reserve(M * cols.size());
  for (std::size_t m = 0; m < M; ++m) {
    for (int c : cols) out.push_back(rows[m * width + c]);
  }
  return out;
}

}  // namespace

std::vector<double> resolve_bandwidths(const KernelConfig& cfg, const Design& design,
                                       std::span<const double> responses, int num_responses) {
  if (!cfg.player_bandwidths.empty()) {
    if (static_cast<int>(cfg.player_bandwidths.size()) != num_responses) {
      throw InvalidArgument("need one bandwidth per player");
    }
    return cfg.player_bandwidths;
  }
  if (cfg.bandwidth > 0.0) return std::vector<double>(num_responses, cfg.bandwidth);
  const auto grid = cfg.grid.empty() ? default_bandwidth_grid(design) : cfg.grid;
  std::vector<double> h(num_responses);
  for (int i = 0; i < num_responses; ++i) {
    h[i] = cross_validate(design, responses, num_responses, i, cfg.family, grid).bandwidth;
  }
  return h;
}

StateLayout covariate_layout(const Dataset& data) {
  std::vector<Coordinate> coords;
  for (const auto& n : data.x_names()) coords.push_back({n, -1, true, Visibility::kCommon});
  return StateLayout(std::move(coords));
}

std::vector<double> apply_policy_to_rows(const Dataset& data, const Policy& policy) {
  const auto layout = covariate_layout(data);
  for (const auto& t : policy.targets()) {
    if (!layout.find(t)) throw Error("schema_error", "policy targets unknown covariate '" + t + "'");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(data.num_markets()) * data.num_covariates());
  for (int m = 0; m < data.num_markets(); ++m) {
    auto v = policy.apply(layout, data.x_row(m));
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

Design make_design(const Dataset& data, std::span<const int> columns,
                   const std::vector<std::string>& discrete) {
  for (const auto& d : discrete) data.covariate_index(d);
  Design design;
  design.rows = data.num_markets();
  design.cols = static_cast<int>(columns.size());
  design.values.reserve(static_cast<std::size_t>(design.rows) * design.cols);
  for (int m = 0; m < design.rows; ++m) {
    for (int c : columns) design.values.push_back(data.x(m, c));
  }
  for (int c : columns) {
    const auto& name = data.x_names()[c];
    design.discrete.push_back(std::find(discrete.begin(), discrete.end(), name) != discrete.end());
  }
  return design;
}

AdpEstimate estimate_adp(const Dataset& data, const Policy& policy, const KernelConfig& cfg,
                         const ConditioningSet& C, std::span<const int> markets) {
  return control_function_adp(data, policy, cfg, {}, C, markets);
}

AdpEstimate control_function_adp(const Dataset& data, const Policy& policy,
                                 const KernelConfig& cfg,
                                 const std::vector<std::string>& controls,
                                 const ConditioningSet& C, std::span<const int> markets) {
  for (const auto& t : policy.targets()) {
    if (std::find(controls.begin(), controls.end(), t) != controls.end()) {
      throw InvalidArgument("policy alters control covariate '" + t + "'");
    }
  }
  auto x1 = resolve_columns(data, cfg.columns);
  std::vector<int> x2;
  for (const auto& c : controls) {
    const int k = data.covariate_index(c);
    x1.erase(std::remove(x1.begin(), x1.end(), k), x1.end());
    x2.push_back(k);
  }
  for (const auto& t : policy.targets()) {
    const int k = data.covariate_index(t);
    if (std::find(x1.begin(), x1.end(), k) == x1.end()) {
      throw InvalidArgument("policy target '" + t + "' is not a regression covariate");
    }
  }
  std::vector<int> cols = x1;
  cols.insert(cols.end(), x2.begin(), x2.end());

  const auto post = apply_policy_to_rows(data, policy);
  KernelProblem pb;
  pb.fit = make_design(data, cols, cfg.discrete);
  pb.query = gather(post, data.num_covariates(), cols);
  pb.support_cols.resize(x1.size());
  std::iota(pb.support_cols.begin(), pb.support_cols.end(), 0);
  pb.in_c = conditioning_flags(data, covariate_layout(data), post, C);
  return run_kernel_adp(data, pb, cfg, markets);
}

OlsEffect ols_effect(const Dataset& data, const Policy& policy, std::span<const int> markets,
                     const std::vector<std::string>& columns) {
  const auto cols = resolve_columns(data, columns);
  const int M = data.num_markets();
  const int p = static_cast<int>(cols.size()) + 1;
  const int n = data.num_players();
  if (M < p) throw Error("rank_deficient", "fewer markets than regressors");
  Eigen::MatrixXd X(M, p);
  Eigen::MatrixXd Y(M, n);
  for (int m = 0; m < M; ++m) {
    X(m, 0) = 1.0;
    for (int c = 0; c < p - 1; ++c) X(m, c + 1) = data.x(m, cols[c]);
    for (int i = 0; i < n; ++i) Y(m, i) = data.y(m, i);
  }
  OlsEffect out;
  out.regressors.push_back("(intercept)");
  for (int c : cols) out.regressors.push_back(data.x_names()[c]);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) {
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (int k = static_cast<int>(qr.rank()); k < p; ++k) {
      if (!names.empty()) names += ", ";
      names += out.regressors[perm[k]];
    }
    throw Error("rank_deficient", "design is collinear; drop one of: " + names);
  }
  const Eigen::MatrixXd gamma = qr.solve(Y);

  const auto post = apply_policy_to_rows(data, policy);
  const auto used = all_markets(data, markets);
  const int K = data.num_covariates();
  out.gamma.assign(n, std::vector<double>(p));
  out.fitted_mean.assign(n, 0.0);
  out.mean.assign(n, 0.0);
  out.delta.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < p; ++c) out.gamma[i][c] = gamma(c, i);
    for (int m : used) {
      double f = gamma(0, i);
      for (int c = 0; c < p - 1; ++c) f += post[static_cast<std::size_t>(m) * K + cols[c]] * gamma(c + 1, i);
      out.fitted_mean[i] += f;
      out.mean[i] += data.y(m, i);
    }
    out.fitted_mean[i] /= static_cast<double>(used.size());
    out.mean[i] /= static_cast<double>(used.size());
    out.delta[i] = out.fitted_mean[i] - out.mean[i];
  }
  return out;
}

Decomposition aggregate_decomposition(const Dataset& data, const std::string& dummy,
                                      Engine engine, const KernelConfig& cfg) {
  const int d = data.covariate_index(dummy);
  const int n = data.num_players();
  std::vector<int> treated;
  Decomposition out;
  out.observable_effect.assign(n, 0.0);
  out.policy_effect.assign(n, 0.0);
  out.raw_difference.assign(n, 0.0);
  std::vector<double> y0(n, 0.0);
  std::vector<double> y1(n, 0.0);
  for (int m = 0; m < data.num_markets(); ++m) {
    const double v = data.x(m, d);
    if (v != 0.0 && v != 1.0) throw InvalidArgument("'" + dummy + "' is not binary");
    auto& acc = v == 1.0 ? y1 : y0;
    for (int i = 0; i < n; ++i) acc[i] += data.y(m, i);
    if (v == 1.0) treated.push_back(m);
  }
  out.treated = static_cast<int>(treated.size());
  out.control = data.num_markets() - out.treated;
  if (out.treated == 0 || out.control == 0) {
    throw Error("empty_group", "'" + dummy + "' takes a single value in the data");
  }
  for (int i = 0; i < n; ++i) {
    y0[i] /= out.control;
    y1[i] /= out.treated;
  }

  // A = mean over treated markets of E[Y | x, d = 0].
  std::vector<double> A(n, 0.0);
  const auto off = Policy::set_constant(dummy, 0.0);
  if (engine == Engine::kOls) {
    auto ols = ols_effect(data, off, treated, cfg.columns);
    A = ols.fitted_mean;
  } else {
    auto cols = resolve_columns(data, cfg.columns);
    if (std::find(cols.begin(), cols.end(), d) == cols.end()) cols.push_back(d);
    auto discrete = cfg.discrete;
    if (std::find(discrete.begin(), discrete.end(), dummy) == discrete.end()) {
      discrete.push_back(dummy);
    }
    const Design design = make_design(data, cols, discrete);
    const auto y = outcome_matrix(data);
    const auto post = gather(apply_policy_to_rows(data, off), data.num_covariates(), cols);
    const auto h = resolve_bandwidths(cfg, design, y, n);
    for (int i = 0; i < n; ++i) {
      KernelSmoother s(design, y, n, cfg.family, h[i]);
      int kept = 0;
      for (int m : treated) {
        auto v = s.fit({post.data() + static_cast<std::size_t>(m) * design.cols,
                        static_cast<std::size_t>(design.cols)});
        if (!v) {
          ++out.dropped;
          continue;
        }
        A[i] += (*v)[i];
        ++kept;
      }
      if (kept == 0) throw Error("empty_group", "no treated market has a d = 0 neighbour");
      A[i] /= kept;
    }
  }
  for (int i = 0; i < n; ++i) {
    out.raw_difference[i] = y0[i] - y1[i];
    out.policy_effect[i] = A[i] - y1[i];
    out.observable_effect[i] = y0[i] - A[i];
  }
  return out;
}

}  // namespace gamecf
