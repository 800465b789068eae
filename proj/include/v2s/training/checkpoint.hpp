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

#ifndef V2S_TRAINING_CHECKPOINT_HPP_
#define V2S_TRAINING_CHECKPOINT_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include "v2s/training/state.hpp"

namespace v2s::training {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// A checkpoint is a directory with one file per network (generator.bin,
/// wave_critic.bin, power_critic.bin: parameters, buffers and Adam moments)
/// and trainer.bin (step counters, rng and sampler state, loss history).
/// Every file carries the config, a format version and a trailing checksum.
void save_checkpoint(TrainState& state, const std::string& dir);

/// Throws FormatError naming both versions on a version mismatch and on a
/// truncated or corrupt file; IoError when a file is missing.
std::unique_ptr<TrainState> load_checkpoint(const std::string& dir);

/// The generator alone, for synthesis.
struct LoadedGenerator {
  TrainConfig config;
  std::unique_ptr<model::Generator<Real>> generator;
};
LoadedGenerator load_generator(const std::string& dir);

}  // namespace v2s::training

#endif  // V2S_TRAINING_CHECKPOINT_HPP_
