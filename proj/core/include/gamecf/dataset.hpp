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

#ifndef GAMECF_DATASET_HPP_
#define GAMECF_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gamecf {

struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t game_hash = 0;
  std::string selection;
  std::string solver;

  bool operator==(const Provenance&) const = default;
};

// M market records of outcomes Y (one column per player, numeric action
// levels) and observed covariates X. Row-major storage.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> y_names, std::vector<std::string> x_names);

  int num_markets() const { return static_cast<int>(market_id_.size()); }
  int num_players() const { return static_cast<int>(y_names_.size()); }
  int num_covariates() const { return static_cast<int>(x_names_.size()); }

  const std::vector<std::string>& y_names() const { return y_names_; }
  const std::vector<std::string>& x_names() const { return x_names_; }
  std::optional<int> find_covariate(const std::string& name) const;
  int covariate_index(const std::string& name) const;

  std::int64_t market_id(int m) const { return market_id_[m]; }
  double y(int m, int i) const {
    return y_[static_cast<std::size_t>(m) * num_players() + i];
  }
  double x(int m, int k) const {
    return x_[static_cast<std::size_t>(m) * num_covariates() + k];
  }
  std::span<const double> y_row(int m) const {
    return {y_.data() + static_cast<std::size_t>(m) * num_players(),
            static_cast<std::size_t>(num_players())};
  }
  std::span<const double> x_row(int m) const {
    return {x_.data() + static_cast<std::size_t>(m) * num_covariates(),
            static_cast<std::size_t>(num_covariates())};
  }

  void add(std::int64_t market_id, std::span<const double> y,
           std::span<const double> x);
  void reserve(int markets);

  // Rows `index` in order (indices may repeat).
  Dataset subset(std::span<const int> index) const;

  std::optional<Provenance> provenance;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::string> y_names_;
  std::vector<std::string> x_names_;
  std::vector<std::int64_t> market_id_;
  std::vector<double> y_;
  std::vector<double> x_;
};

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// CSV with header market_id,<y columns>,<x columns>; outcome columns are
// those whose name starts with "y_". Rows are written in market_id order.
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text, const std::string& source = "<csv>");
Dataset read_dataset(const std::string& path);
void write_dataset(const Dataset& data, const std::string& path);

// Cell average of Y over rows with X == x exactly (empirical mode of the
// conditional mean). Empty when no row matches.
std::optional<std::vector<double>> cell_mean(const Dataset& data,
                                             std::span<const double> x);

}  // namespace gamecf

#endif  // GAMECF_DATASET_HPP_
