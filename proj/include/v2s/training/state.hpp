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

#ifndef V2S_TRAINING_STATE_HPP_
#define V2S_TRAINING_STATE_HPP_

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "v2s/core/config.hpp"
#include "v2s/core/rng.hpp"
#include "v2s/losses/losses.hpp"
#include "v2s/model/critics.hpp"
#include "v2s/model/generator.hpp"
#include "v2s/nn/adam.hpp"

namespace v2s::training {

/// Scalar type of every trained network.
using Real = float;

enum class Phase { kCritic, kGenerator };

/// One row of the metrics log. Disabled terms are exactly zero.
struct StepMetrics {
  std::int64_t step = 0;  // 1-based generator step the row belongs to
  Phase phase = Phase::kCritic;
  int substep = 0;  // critic iteration within the step; 0 for generator rows
  int active_critics = 0;
  double wave_critic = 0.0;
  double wave_gp = 0.0;
  double power_critic = 0.0;
  double power_gp = 0.0;
  double adversarial = 0.0;
  double pase = 0.0;
  double power = 0.0;
  double mfcc = 0.0;
  double total = 0.0;
  double wall_ms = 0.0;

  bool operator==(const StepMetrics&) const = default;
};

/// Bounded record of the most recent metrics rows.
class LossHistory {
 public:
  static constexpr size_t kCapacity = 512;

  void push(const StepMetrics& m);
  const std::deque<StepMetrics>& rows() const { return rows_; }
  void clear() { rows_.clear(); }

 private:
  std::deque<StepMetrics> rows_;
};

/// Position of the seeded epoch shuffle over the training examples.
struct SamplerState {
  std::int64_t epoch = -1;
  std::int64_t position = 0;
  std::vector<std::int64_t> order;

  bool operator==(const SamplerState&) const = default;
};

model::GeneratorConfig generator_config(const TrainConfig& config);
model::WaveCriticConfig wave_critic_config(const TrainConfig& config);
model::PowerCriticConfig power_critic_config(const TrainConfig& config);
losses::LossToggles loss_toggles(const TrainConfig& config);

/// Everything that evolves during training. Networks are initialized from
/// config.seed; the optimizers refer to the networks, so a state is neither
/// copied nor moved.
class TrainState {
 public:
  explicit TrainState(const TrainConfig& config);
  TrainState(const TrainState&) = delete;
  TrainState& operator=(const TrainState&) = delete;

  TrainConfig config;

 private:
  Rng init_rng_;

 public:
  model::Generator<Real> generator;
  model::WaveCritic<Real> wave_critic;
  model::PowerCritic<Real> power_critic;
  nn::Adam<Real> generator_opt;
  nn::Adam<Real> wave_opt;
  nn::Adam<Real> power_opt;

  std::int64_t gen_step = 0;
  std::int64_t critic_step = 0;
  /// Drives batch order, augmentation, critic windows and interpolation.
  Rng rng;
  SamplerState sampler;
  LossHistory history;

  /// Frozen perceptual extractor derived from config.pase_seed.
  losses::PerceptualExtractor& extractor() { return *extractor_; }

 private:
  std::unique_ptr<losses::PerceptualExtractor> extractor_;
};

}  // namespace v2s::training

#endif  // V2S_TRAINING_STATE_HPP_
