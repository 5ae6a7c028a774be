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

#include "gamecf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "gamecf/error.hpp"
#include "gamecf/io.hpp"

namespace gamecf {

Dataset::Dataset(std::vector<std::string> y_names, std::vector<std::string> x_names)
    : y_names_(std::move(y_names)), x_names_(std::move(x_names)) {}

std::optional<int> Dataset::find_covariate(const std::string& name) const {
  for (int k = 0; k < num_covariates(); ++k) {
    if (x_names_[k] == name) return k;
  }
  return std::nullopt;
}

int Dataset::covariate_index(const std::string& name) const {
  auto k = find_covariate(name);
  if (!k) throw InvalidArgument("dataset has no covariate '" + name + "'");
  return *k;
}

void Dataset::add(std::int64_t market_id, std::span<const double> y,
                  std::span<const double> x) {
  if (static_cast<int>(y.size()) != num_players() ||
      static_cast<int>(x.size()) != num_covariates()) {
    throw InvalidArgument("record width does not match the dataset");
  }
  market_id_.push_back(market_id);
  y_.insert(y_.end(), y.begin(), y.end());
  x_.insert(x_.end(), x.begin(), x.end());
}

void Dataset::reserve(int markets) {
  market_id_.reserve(markets);
  y_.reserve(static_cast<std::size_t>(markets) * num_players());
  x_.reserve(static_cast<std::size_t>(markets) * num_covariates());
}

Dataset Dataset::subset(std::span<const int> index) const {
  Dataset out(y_names_, x_names_);
  out.reserve(static_cast<int>(index.size()));
  for (int m : index) out.add(market_id_[m], y_row(m), x_row(m));
  return out;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out = "market_id";
  for (const auto& n : data.y_names()) out += "," + n;
  for (const auto& n : data.x_names()) out += "," + n;
  out += "\n";
  std::vector<int> order(data.num_markets());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return data.market_id(a) < data.market_id(b);
  });
  for (int m : order) {
    out += std::to_string(data.market_id(m));
    for (double v : data.y_row(m)) out += "," + format_double(v);
    for (double v : data.x_row(m)) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Dataset dataset_from_csv(const std::string& text, const std::string& source) {
  std::vector<std::string_view> lines;
  std::string_view all(text);
  std::size_t start = 0;
  while (start < all.size()) {
    auto pos = all.find('\n', start);
    if (pos == std::string_view::npos) pos = all.size();
    lines.push_back(all.substr(start, pos - start));
    start = pos + 1;
  }
  auto fail = [&](std::size_t line, const std::string& what) {
    return Error("schema_error", source + ":" + std::to_string(line) + ": " + what);
  };
  if (lines.empty()) throw fail(1, "missing header");
  auto header = split(lines[0]);
  for (auto& h : header) h = trim(h);
  if (header.empty() || header[0] != "market_id") {
    throw fail(1, "first column must be market_id");
  }
  std::vector<std::string> y_names;
  std::vector<std::string> x_names;
  for (std::size_t c = 1; c < header.size(); ++c) {
    std::string name(header[c]);
    if (name.empty()) throw fail(1, "empty column name");
    const bool is_y = name.rfind("y_", 0) == 0;
    if (is_y && !x_names.empty()) {
      throw fail(1, "outcome column '" + name + "' after covariate columns");
    }
    (is_y ? y_names : x_names).push_back(std::move(name));
  }
  if (y_names.empty()) throw fail(1, "no outcome (y_*) columns");
  Dataset data(std::move(y_names), std::move(x_names));
  const std::size_t width = header.size();
  std::vector<double> y(data.num_players());
  std::vector<double> x(data.num_covariates());
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (trim(lines[l]).empty()) continue;
    auto cells = split(lines[l]);
    if (cells.size() != width) {
      throw fail(l + 1, "expected " + std::to_string(width) + " fields, found " +
                            std::to_string(cells.size()));
    }
    std::int64_t id = 0;
    {
      auto c = trim(cells[0]);
      auto res = std::from_chars(c.data(), c.data() + c.size(), id);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw fail(l + 1, "market_id '" + std::string(c) + "' is not an integer");
      }
    }
    for (std::size_t c = 1; c < width; ++c) {
      auto cell = trim(cells[c]);
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw fail(l + 1, "column " + std::string(header[c]) + ": '" + std::string(cell) +
                              "' is not a finite number");
      }
      if (c <= y.size()) {
        y[c - 1] = v;
      } else {
        x[c - 1 - y.size()] = v;
      }
    }
    data.add(id, y, x);
  }
  return data;
}

Dataset read_dataset(const std::string& path) {
  return dataset_from_csv(read_file(path), path);
}

void write_dataset(const Dataset& data, const std::string& path) {
  write_file_atomic(path, dataset_to_csv(data));
}

std::optional<std::vector<double>> cell_mean(const Dataset& data,
                                             std::span<const double> x) {
  if (static_cast<int>(x.size()) != data.num_covariates()) {
    throw InvalidArgument("query must list every covariate");
  }
  std::vector<double> sum(data.num_players(), 0.0);
  int count = 0;
  for (int m = 0; m < data.num_markets(); ++m) {
    auto row = data.x_row(m);
    if (!std::equal(row.begin(), row.end(), x.begin())) continue;
    ++count;
    for (int i = 0; i < data.num_players(); ++i) sum[i] += data.y(m, i);
  }
  if (count == 0) return std::nullopt;
  for (double& v : sum) v /= count;
  return sum;
}

}  // namespace gamecf
