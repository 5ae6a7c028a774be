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


#ifndef GAMECF_TOOLS_COMMANDS_HPP_
#define GAMECF_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>

namespace gamecf::cli {

struct CommandOptions {
  std::string config;                  // empty: no config file
  std::optional<std::uint64_t> seed;   // overrides the config's "seed"
  std::string out = ".";
};

// Each command returns the process exit code and throws gamecf::Error on
// failure.
int cmd_simulate(const CommandOptions& opt);
int cmd_bounds(const CommandOptions& opt);
int cmd_estimate(const CommandOptions& opt);
int cmd_verify(const CommandOptions& opt);

// Single-line JSON diagnostic {"error": code, "message": message}.
std::string error_line(const std::string& code, const std::string& message);

// Argument parsing and dispatch. Errors become one JSON line on stderr and
// exit code 2; failed verification exits with 1.
int run(int argc, char** argv);

}  // namespace gamecf::cli

#endif  // GAMECF_TOOLS_COMMANDS_HPP_
