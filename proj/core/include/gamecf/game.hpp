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

#ifndef GAMECF_GAME_HPP_
#define GAMECF_GAME_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gamecf {

// Tolerance used to identify two payoff states with each other (per
// coordinate, absolute). Policy images within this distance of a grid point
// are treated as landing on that point.
inline constexpr double kStateMatchTolerance = 1e-9;

// Probability vectors (state weights, signal kernels) must sum to one within
// this tolerance.
inline constexpr double kProbabilityTolerance = 1e-12;

enum class Visibility { kCommon, kPrivate };

// One coordinate of the payoff state. `owner` is the player whose payoff the
// coordinate belongs to (-1 for market-level coordinates); `observed` says
// whether the econometrician sees it; `visibility` says which players see it
// (everyone, or only the owner).
struct Coordinate {
  std::string name;
  int owner = -1;
  bool observed = true;
  Visibility visibility = Visibility::kCommon;
};

class StateLayout {
 public:
  StateLayout() = default;
  explicit StateLayout(std::vector<Coordinate> coordinates);

  int size() const { return static_cast<int>(coordinates_.size()); }
  const Coordinate& operator[](int k) const { return coordinates_[k]; }
  const std::vector<Coordinate>& coordinates() const { return coordinates_; }

  std::optional<int> find(std::string_view name) const;
  // Throws if the name is unknown.
  int index_of(std::string_view name) const;
  std::vector<int> observed_indices() const;

 private:
  std::vector<Coordinate> coordinates_;
};

// Mixed-radix enumeration of action profiles. The last player varies
// fastest, so ascending index order is lexicographic order of profiles.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  explicit ProfileSpace(std::vector<int> action_counts);

  int size() const { return size_; }
  int num_players() const { return static_cast<int>(counts_.size()); }
  int action_count(int player) const { return counts_[player]; }

  int action_of(int profile, int player) const {
    return (profile / strides_[player]) % counts_[player];
  }
  int with_action(int profile, int player, int action) const {
    return profile + (action - action_of(profile, player)) * strides_[player];
  }
  std::vector<int> decode(int profile) const;
  int encode(std::span<const int> actions) const;

 private:
  std::vector<int> counts_;
  std::vector<int> strides_;
  int size_ = 0;
};

enum class InfoKind { kComplete, kPublicPrivate, kCustom };
enum class Regime { kPre, kPost };

struct SignalDraw {
  std::vector<int> profile;  // one signal index per player
  double prob = 0.0;
};

// Finite signal spaces T_1 x ... x T_n and the kernel mu_{T|W}; rows[w] is a
// sparse distribution over signal profiles given state w.
struct InformationStructure {
  std::vector<int> signal_counts;
  std::vector<std::vector<SignalDraw>> rows;
};

// u_i(y, w) evaluated at arbitrary state values, so that policy images that
// leave the grid still have payoffs.
using PayoffFn = std::function<double(int player, std::span<const int> profile,
                                      std::span<const double> state)>;

struct GridPoint {
  std::vector<double> values;
  double weight = 0.0;
};

struct GameSpec {
  std::vector<std::vector<double>> actions;  // numeric action level per player
  StateLayout layout;
  std::vector<GridPoint> states;
  PayoffFn payoff;
  InfoKind info_kind = InfoKind::kComplete;
  // Required iff info_kind == kCustom; rows indexed like `states`.
  std::optional<InformationStructure> custom_information;
};

class FiniteGame {
 public:
  // Validates the parameters and materializes payoffs and signals.
  static FiniteGame Create(GameSpec spec);

  int num_players() const { return profiles_.num_players(); }
  const ProfileSpace& profiles() const { return profiles_; }
  const std::vector<double>& actions(int player) const {
    return actions_[player];
  }
  const std::vector<std::vector<double>>& all_actions() const {
    return actions_;
  }
  // Action levels of every player in a profile.
  std::vector<double> profile_values(int profile) const;

  const StateLayout& layout() const { return layout_; }
  int num_states() const { return static_cast<int>(weights_.size()); }
  std::span<const double> state(int w) const {
    return {states_.data() + static_cast<std::size_t>(w) * layout_.size(),
            static_cast<std::size_t>(layout_.size())};
  }
  double weight(int w) const { return weights_[w]; }
  const std::vector<double>& weights() const { return weights_; }
  // True for states that are not in the support of the game this one was
  // derived from (set by apply_policy).
  bool off_support(int w) const { return off_support_[w]; }

  double payoff(int player, int profile, int w) const {
    return payoffs_[(static_cast<std::size_t>(w) * profiles_.size() + profile) *
                        num_players() +
                    player];
  }
  const PayoffFn& payoff_fn() const { return *payoff_fn_; }

  InfoKind info_kind() const { return info_kind_; }
  const InformationStructure& information() const { return information_; }
  Regime regime() const { return regime_; }

  // Whether every player's signal reveals coordinate k by construction.
  bool coordinate_common(int k) const;

  std::optional<int> find_state(std::span<const double> values) const;

  // Builds a game with the same players, payoffs, layout and information
  // rule on a new state grid. Custom kernels cannot be extended to new
  // states, so `states` must then match the existing grid point-for-point.
  FiniteGame with_states(std::vector<GridPoint> states,
                         std::vector<bool> off_support, Regime regime) const;

  // Replaces the information structure by an explicit kernel over the
  // current grid.
  FiniteGame with_information(InformationStructure information) const;

  // A one-state copy of a complete-information game: state w with weight 1.
  FiniteGame state_slice(int w) const;

 private:
  FiniteGame() = default;
  void materialize();

  std::vector<std::vector<double>> actions_;
  ProfileSpace profiles_;
  StateLayout layout_;
  std::vector<double> states_;
  std::vector<double> weights_;
  std::vector<bool> off_support_;
  std::shared_ptr<const PayoffFn> payoff_fn_;
  std::vector<double> payoffs_;
  InfoKind info_kind_ = InfoKind::kComplete;
  InformationStructure information_;
  Regime regime_ = Regime::kPre;
};

// FNV-1a digest of actions, layout, grid, weights, payoffs and signal kernel.
std::uint64_t game_hash(const FiniteGame& game);

// ---------------------------------------------------------------------------
// Canonical constructors.

// Column name x_<owner+1>_<k> for the k-th (1-based) covariate of a player;
// market-level covariates (owner -1) use x_0_<k>.
std::string default_covariate_name(int owner, int k);

struct EntryGameParams {
  int players = 2;
  double delta = -1.0;
  // beta[i] has one coefficient per covariate column.
  std::vector<std::vector<double>> beta;
  // Covariate column metadata (names, owners). Columns are always observed
  // and publicly visible. Empty names get default_covariate_name.
  std::vector<Coordinate> x_columns;
  std::vector<GridPoint> x_grid;    // covariate rows
  std::vector<GridPoint> eps_grid;  // one shock per player
  InfoKind info = InfoKind::kComplete;
};

// u_i(y, w) = y_i (delta * sum_{j != i} y_j + x' beta_i + eps_i) with
// y_i in {0, 1}; the state distribution is the product of the x and eps
// grids. Coordinates are x columns followed by eps_1..eps_n.
FiniteGame build_entry_game(const EntryGameParams& params);

// Same payoff, but with an explicit joint distribution over (x, eps): each
// row's values are the x columns followed by the n shocks.
FiniteGame build_entry_game_joint(int players, double delta,
                                  const std::vector<std::vector<double>>& beta,
                                  std::vector<Coordinate> x_columns,
                                  const std::vector<GridPoint>& joint_grid,
                                  InfoKind info);

// Sealed-bid second-price auction on a bid grid. Actions of every bidder are
// {no bid (level 0)} followed by the sorted value levels. A bid qualifies when
// it is positive and at least the reserve; the highest qualifying bid wins
// (ties split the surplus evenly) and pays the second-highest qualifying bid,
// or the reserve when it is the only qualifying bid. The reserve price is the
// observed public coordinate; values v_1..v_n are private and unobserved.
FiniteGame build_second_price_auction(int bidders,
                                      const std::vector<GridPoint>& value_grid,
                                      const std::vector<GridPoint>& reserve_grid);

// ---------------------------------------------------------------------------
// Policies f: W -> W acting on named coordinates.

class Policy {
 public:
  enum class Kind { kSetConstant, kAdditiveShift, kTable };

  struct TableEntry {
    std::vector<double> from;
    std::vector<double> to;
  };

  struct Step {
    Kind kind = Kind::kSetConstant;
    std::vector<std::string> coordinates;
    double value = 0.0;  // constant or shift
    std::vector<TableEntry> table;
  };

  Policy() = default;  // identity

  static Policy identity() { return Policy(); }
  static Policy set_constant(std::string coordinate, double value);
  static Policy additive_shift(std::string coordinate, double amount);
  // Maps listed grid points of `coordinates` to new values; unlisted points
  // are left unchanged.
  static Policy table(std::vector<std::string> coordinates,
                      std::vector<TableEntry> entries);

  // Sequential composition: `then` is applied after this policy.
  Policy then(const Policy& next) const;

  bool is_identity() const { return steps_.empty(); }
  const std::vector<Step>& steps() const { return steps_; }
  std::vector<std::string> targets() const;

  std::vector<double> apply(const StateLayout& layout,
                            std::span<const double> state) const;

 private:
  std::vector<Step> steps_;
};

// Post-policy game together with the transport map of grid points.
struct PolicyImage {
  FiniteGame game;
  // image[w] = index in `game` of f(state w) for every pre-policy state.
  std::vector<int> image;
};

// Pushes mu_W forward through f. Pre-policy grid points keep their indices;
// images that leave the grid are appended. Every state outside the
// pre-policy support is flagged off-support. Payoffs, actions and the
// information rule are unchanged.
PolicyImage policy_image(const FiniteGame& game, const Policy& policy);
FiniteGame apply_policy(const FiniteGame& game, const Policy& policy);

struct AdmissibilityReport {
  bool holds = true;
  std::vector<std::string> reasons;
};

// A policy is admissible when it alters only observed coordinates that
// every player's signal reveals.
AdmissibilityReport check_policy_admissible(const FiniteGame& game,
                                    const Policy& policy);

}  // namespace gamecf

#endif  // GAMECF_GAME_HPP_
