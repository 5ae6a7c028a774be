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

#ifndef GAMECF_IO_HPP_
#define GAMECF_IO_HPP_

#include <string>

namespace gamecf {

std::string read_file(const std::string& path);

// Writes to a temporary sibling and renames it over `path`, so readers never
// see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace gamecf

#endif  // GAMECF_IO_HPP_
