// Copyright 2026 The v2s Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef V2S_CORE_PARALLEL_HPP_
#define V2S_CORE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace v2s {

/// Worker cap from V2S_NUM_WORKERS (default 1; invalid values fall back to 1).
int num_workers();

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Each index runs
/// exactly once; the first exception thrown is rethrown after all workers stop.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace v2s

#endif  // V2S_CORE_PARALLEL_HPP_
