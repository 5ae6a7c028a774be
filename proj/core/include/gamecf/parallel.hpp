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

#ifndef GAMECF_PARALLEL_HPP_
#define GAMECF_PARALLEL_HPP_

#include <functional>

namespace gamecf {

// Worker count: GAMECF_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int thread_count();

// Runs body(k) for k in [0, n) across up to thread_count() threads. Each
// index runs exactly once; the first exception thrown is rethrown after all
// workers join.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace gamecf

#endif  // GAMECF_PARALLEL_HPP_
