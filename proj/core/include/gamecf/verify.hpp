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


#ifndef GAMECF_VERIFY_HPP_
#define GAMECF_VERIFY_HPP_

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace gamecf {

struct VerifyOptions {
  std::uint64_t seed = 1;
  int instances = 50;
  double eps = 1e-6;
  // Include the selection rule keyed on the pre/post label. Its violation is
  // reported as an expected failure, never as a suite failure.
  bool negative_control = true;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  // Expected-failure record: `passed` then means the violation was observed.
  bool negative_control = false;
  int checked = 0;
  double worst = 0.0;      // largest violation or spread seen
  double tolerance = 0.0;  // pass threshold on `worst`
  std::string detail;
  nlohmann::json failing;  // replayable description of the worst instance

  nlohmann::json to_json() const;
};

// lower <= EP <= upper within 1e-9 on random instances with state-invariant
// selection and admissible policies.
SuiteResult verify_sandwich(const VerifyOptions& opt);
// |EP - DP| < 1e-12 under dummy-to-zero policies.
SuiteResult verify_dummy_exactness(const VerifyOptions& opt);
// Constructed games attain both bounds within opt.eps on instances whose
// policy leaves the support.
SuiteResult verify_sharpness(const VerifyOptions& opt);
// State-invariant rules pass the direct invariance check.
SuiteResult verify_invariance(const VerifyOptions& opt);
// Expected failure: EP leaves [lower, upper] by more than 0.05.
SuiteResult verify_negative_control();
// Every per-state pure NE profile is a feasible deterministic BCE rule.
SuiteResult verify_bce_embedding(const VerifyOptions& opt);
// Dominant-strategy games: support functions in 50 directions describe a
// single point (spread below 1e-9).
SuiteResult verify_bce_dominant(const VerifyOptions& opt);
// Signals drawn from a player's own signal leave 50 joint outcome support
// functions unchanged within 1e-8.
SuiteResult verify_bce_augmentation(const VerifyOptions& opt);
// Threshold example: positive deviation gain and a decomposition gap > 1e-3.
SuiteResult verify_threshold();

std::vector<SuiteResult> run_all(const VerifyOptions& opt);

}  // namespace gamecf

#endif  // GAMECF_VERIFY_HPP_
