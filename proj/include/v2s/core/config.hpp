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

#ifndef V2S_CORE_CONFIG_HPP_
#define V2S_CORE_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "v2s/core/types.hpp"

namespace v2s {

/// Everything a training run needs besides data. Serialized as a flat
/// `key = value` text file where every field below is a key.
struct TrainConfig {
  double learning_rate = 1e-4;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.99;
  int critic_steps_per_gen_step = 6;
  double clip_seconds = 1.0;
  int batch_size = 8;
  int total_gen_steps = 1000;
  std::uint64_t seed = 0;

  // Ablation toggles.
  bool enable_wave_critic = true;
  bool enable_power_critic = true;
  bool enable_pase_loss = true;
  bool enable_power_loss = true;
  bool enable_mfcc_loss = true;

  double model_width_scale = 1.0;
  LossWeights weights;

  int sample_rate = kDefaultSampleRate;
  int frame_rate = kDefaultFrameRate;
  int frame_height = kDefaultFrameSize;
  int frame_width = kDefaultFrameSize;
  bool augment = true;
  /// Write an intermediate checkpoint every this many generator steps (0 = final only).
  int checkpoint_every = 0;
  std::uint64_t pase_seed = 1234;

  bool operator==(const TrainConfig&) const = default;
};

/// Returns one message per violated invariant, naming the field; empty iff valid.
std::vector<std::string> validate_config(const TrainConfig& config);

std::string to_config_text(const TrainConfig& config);
/// Throws ConfigError naming the line on unknown keys or unparsable values.
TrainConfig parse_config(const std::string& text);

TrainConfig load_config(const std::string& path);
void save_config(const TrainConfig& config, const std::string& path);

}  // namespace v2s

#endif  // V2S_CORE_CONFIG_HPP_
