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

#ifndef V2S_MODEL_GENERATOR_HPP_
#define V2S_MODEL_GENERATOR_HPP_

#include <optional>
#include <string>
#include <vector>

#include "v2s/core/types.hpp"
#include "v2s/model/resnet.hpp"
#include "v2s/nn/gru.hpp"
#include "v2s/nn/layers.hpp"

namespace v2s::model {

/// Channel counts below are nominal (width scale 1); every one is scaled by
/// width_scale.
struct GeneratorConfig {
  double width_scale = 1.0;
  int frame_height = kDefaultFrameSize;
  int frame_width = kDefaultFrameSize;
  int samples_per_frame = 640;

  Index frontend_channels() const { return scaled_width(64, width_scale); }
  Index gru_hidden() const { return scaled_width(256, width_scale); }
  Index feature_dim() const { return 2 * gru_hidden(); }
  void validate() const;
};

/// Number of neighbouring frames seen by the front-end (two on each side).
inline constexpr int kTemporalReceptiveField = 5;

/// Video-to-waveform generator: a spatio-temporal front-end with a five-frame
/// temporal kernel, a ResNet-18 trunk applied per frame, a two-layer BiGRU
/// over frames and a stack of six transposed 1-D convolutions that turns
/// each frame feature into a 2N-sample segment; segments are overlap-added.
///
/// Batched methods take B clips of equal length T. Waveform batches are
/// (T * N) x B matrices, one clip per column.
template <typename Scalar>
class Generator {
 public:
  Generator(const GeneratorConfig& config, Rng& rng);

  const GeneratorConfig& config() const { return config_; }

  /// Per-frame features before the recurrent layer, (B * T) x trunk_dim,
  /// row b * T + t.
  nn::Matrix<Scalar> encode_frames(const std::vector<const VideoClip*>& clips, Mode mode);
  /// Recurrent layer over encode_frames() output, (B * T) x feature_dim.
  nn::Matrix<Scalar> temporal(const nn::Matrix<Scalar>& frame_features, Index batch, Index steps);
  /// Segments from (B * T) x feature_dim features, overlap-added per clip.
  nn::Matrix<Scalar> decode(const nn::Matrix<Scalar>& features, Index batch, Index steps, Mode mode);

  nn::Matrix<Scalar> forward(const std::vector<const VideoClip*>& clips, Mode mode);
  /// Accumulates parameter gradients for d(loss)/d(waveforms) after forward().
  void backward(const nn::Matrix<Scalar>& grad_waveforms);

  ParameterList<Scalar> parameters();
  Index trunk_dim() const { return trunk_.output_dim(); }

 private:
  FeatureMap<Scalar> stack_frames(const std::vector<const VideoClip*>& clips) const;

  struct DecoderLayer {
    nn::ConvTranspose1d<Scalar> conv;
    std::optional<nn::BatchNorm<Scalar>> norm;  // absent for the output layer
    nn::Relu<Scalar> relu;
  };

  GeneratorConfig config_;
  nn::Conv2d<Scalar> frontend_;
  nn::BatchNorm<Scalar> frontend_norm_;
  nn::Relu<Scalar> frontend_relu_;
  nn::MaxPool2d<Scalar> frontend_pool_;
  ResNet18Trunk<Scalar> trunk_;
  nn::BiGru<Scalar> gru_;
  std::vector<DecoderLayer> decoder_;
  nn::Tanh<Scalar> output_tanh_;
  Index batch_ = 0, steps_ = 0;
};

/// Decoder strides; their product is the segment length 2N = 1280.
inline constexpr int kDecoderStrides[6] = {5, 4, 4, 4, 2, 2};

/// Inference-mode encoder output (after the recurrent layer), T x D.
template <typename Scalar>
FeatureSequence encode(Generator<Scalar>& net, const VideoClip& clip);

/// Inference-mode per-frame features before the recurrent layer.
template <typename Scalar>
FeatureSequence encode_frames(Generator<Scalar>& net, const VideoClip& clip);

/// Inference-mode decoder: T x D features to a T * N sample waveform.
template <typename Scalar>
Waveform decode(Generator<Scalar>& net, const FeatureSequence& features, int sample_rate);

template <typename Scalar>
Waveform generate(Generator<Scalar>& net, const VideoClip& clip, int sample_rate);

}  // namespace v2s::model

#endif  // V2S_MODEL_GENERATOR_HPP_
