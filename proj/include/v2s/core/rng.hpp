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

#ifndef V2S_CORE_RNG_HPP_
#define V2S_CORE_RNG_HPP_

#include <cstdint>
#include <random>
#include <string>

namespace v2s {

/// Explicit random stream. Equal (seed, stream) pairs yield equal draws.
///
/// Distributions are constructed per draw so the engine state alone
/// determines the future sequence, which keeps state() round-trippable.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);      // [lo, hi)
  double normal(double mean = 0.0, double stddev = 1.0);
  bool bernoulli(double p);
  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  std::uint64_t next_u64() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Textual engine state; restore() reproduces the exact draw sequence.
  std::string state() const;
  void restore(const std::string& state);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace v2s

#endif  // V2S_CORE_RNG_HPP_
