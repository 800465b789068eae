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

#ifndef V2S_TRAINING_TRAINER_HPP_
#define V2S_TRAINING_TRAINER_HPP_

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "v2s/core/config.hpp"
#include "v2s/data/manifest.hpp"
#include "v2s/training/state.hpp"

namespace v2s::training {

/// One utterance in memory, audio trimmed or zero-padded to T * N samples.
struct Example {
  std::string id;
  VideoClip video;
  Waveform audio;
};

/// Loads the records of one split. Throws ShapeError naming the file when a
/// video's frame size differs from the config.
std::vector<Example> load_examples(const std::vector<data::ManifestRecord>& records, const TrainConfig& config);

/// B clips cut to a common length T and their audio, (T * N) x B.
struct Batch {
  std::vector<VideoClip> videos;
  Eigen::MatrixXd audio;

  std::vector<const VideoClip*> video_ptrs() const;
};

/// Draws the next config.batch_size examples of the seeded epoch order
/// (reshuffling at each epoch end) and augments them when enabled.
Batch next_batch(TrainState& state, const std::vector<Example>& examples);

/// Generator output for a batch, (T * N) x B, with batch statistics and
/// untouched running statistics.
Eigen::MatrixXd generate_batch(TrainState& state, const Batch& batch);

/// One Adam step on each enabled critic minimizing its critic loss plus
/// gradient penalty, on aligned windows cut from the full real and fake
/// utterances. Generator parameters are not touched.
StepMetrics critic_update(TrainState& state, const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake);

/// One Adam step on the generator: adversarial terms on a sampled window,
/// perceptual, power and MFCC terms on the full utterances. Critic
/// parameters are not touched. Throws NumericError naming the term and step
/// when a loss is not finite.
StepMetrics generator_update(TrainState& state, const Batch& batch);

struct TrainOptions {
  std::string out_dir;
  /// Checkpoint directory to continue from; empty for a fresh run.
  std::string resume_from;
  /// Called after every logged row.
  std::function<void(const StepMetrics&)> on_step;
};

struct TrainResult {
  std::string checkpoint_dir;
  std::string metrics_path;
  std::int64_t gen_steps = 0;
  std::int64_t critic_steps = 0;
};

/// Alternates critic_steps_per_gen_step critic updates with one generator
/// update until config.total_gen_steps. Writes out_dir/metrics.csv
/// (deterministic columns), out_dir/timing.csv (wall time per row),
/// periodic checkpoints under out_dir/checkpoints/ and the final one at
/// out_dir/checkpoint. On resume, the config may differ from the
/// checkpoint's only in total_gen_steps and checkpoint_every.
TrainResult train(const TrainConfig& config, const std::string& manifest_path, const TrainOptions& options);

/// Eval-mode synthesis with the test-time crop used in training.
Waveform synthesize(model::Generator<Real>& generator, const TrainConfig& config, const VideoClip& clip);

/// CSV helpers for the metrics log.
std::string metrics_header();
std::string metrics_row(const StepMetrics& m);

}  // namespace v2s::training

#endif  // V2S_TRAINING_TRAINER_HPP_
