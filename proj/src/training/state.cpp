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

#include "v2s/training/state.hpp"

#include <cmath>

#include "v2s/dsp/stft.hpp"

namespace v2s::training {

namespace {

constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kTrainStream = 0x7a11;

}  // namespace

void LossHistory::push(const StepMetrics& m) {
  rows_.push_back(m);
  if (rows_.size() > kCapacity) rows_.pop_front();
}

model::GeneratorConfig generator_config(const TrainConfig& config) {
  model::GeneratorConfig g;
  g.width_scale = config.model_width_scale;
  g.frame_height = config.frame_height;
  g.frame_width = config.frame_width;
  g.samples_per_frame = samples_per_frame(config.sample_rate, config.frame_rate);
  return g;
}

model::WaveCriticConfig wave_critic_config(const TrainConfig& config) {
  return {config.model_width_scale, static_cast<Eigen::Index>(std::lround(config.clip_seconds * config.sample_rate))};
}

model::PowerCriticConfig power_critic_config(const TrainConfig& config) {
  dsp::StftParams stft;
  stft.sample_rate = config.sample_rate;
  return {config.model_width_scale, stft.num_bins(), stft.num_frames(wave_critic_config(config).input_length)};
}

losses::LossToggles loss_toggles(const TrainConfig& config) {
  return {config.enable_wave_critic, config.enable_power_critic, config.enable_pase_loss, config.enable_power_loss,
          config.enable_mfcc_loss};
}

TrainState::TrainState(const TrainConfig& cfg)
    : config(cfg),
      init_rng_(cfg.seed, kInitStream),
      generator(generator_config(cfg), init_rng_),
      wave_critic(wave_critic_config(cfg), init_rng_),
      power_critic(power_critic_config(cfg), init_rng_),
      generator_opt(generator.parameters(), cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2),
      wave_opt(wave_critic.parameters(), cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2),
      power_opt(power_critic.parameters(), cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2),
      rng(cfg.seed, kTrainStream),
      extractor_(losses::fallback_extractor(cfg.pase_seed)) {}

}  // namespace v2s::training
