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

#ifndef GAMECF_ERROR_HPP_
#define GAMECF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gamecf {

// All library failures are reported as gamecf::Error. `code()` is a short
// machine-readable tag (e.g. "invalid_argument", "policy_not_admissible") that the CLI
// forwards in its JSON diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

inline Error InvalidArgument(const std::string& message) {
  return Error("invalid_argument", message);
}

inline Error NumericalFailure(const std::string& message) {
  return Error("numerical", message);
}

}  // namespace gamecf

#endif  // GAMECF_ERROR_HPP_
