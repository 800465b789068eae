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

#ifndef V2S_MODEL_CRITICS_HPP_
#define V2S_MODEL_CRITICS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "v2s/core/types.hpp"
#include "v2s/model/resnet.hpp"
#include "v2s/nn/layers.hpp"

namespace v2s::model {

// Both critics map a batch of inputs (one per column) to one unconstrained
// score per column. They use no normalization layers and only piecewise
// linear activations, so forward_tangent() + backward() give exact
// parameter gradients of input-gradient functionals.

struct WaveCriticConfig {
  double width_scale = 1.0;
  Index input_length = kDefaultSampleRate;
};

/// Seven 1-D convolutions: a wide input convolution, four grouped stride-4
/// downsampling convolutions, a kernel-5 convolution (each followed by a
/// leaky ReLU with slope 0.2), then a kernel-3 single-channel convolution
/// averaged over time as the score.
template <typename ScalarT>
class WaveCritic {
 public:
  using Scalar = ScalarT;
  WaveCritic(const WaveCriticConfig& config, Rng& rng);

  /// x: input_length x B.
  nn::Vector<Scalar> forward(const nn::Matrix<Scalar>& x);
  nn::Vector<Scalar> forward_tangent(const nn::Matrix<Scalar>& v);
  /// Returns d(sum_b w_b score_b)/dx; accumulates parameter gradients when asked.
  nn::Matrix<Scalar> backward(const nn::Vector<Scalar>& weights, bool param_grads);

  ParameterList<Scalar> parameters();
  Index input_length() const { return config_.input_length; }

 private:
  FeatureMap<Scalar> as_map(const nn::Matrix<Scalar>& x) const;
  nn::Vector<Scalar> head(const FeatureMap<Scalar>& y);

  WaveCriticConfig config_;
  std::vector<nn::Conv2d<Scalar>> convs_;
  std::vector<nn::LeakyRelu<Scalar>> acts_;
  Index batch_ = 0;
  Index out_len_ = 0;
};

struct PowerCriticConfig {
  double width_scale = 1.0;
  Index num_bins = 257;
  Index num_frames = 98;
};

/// ResNet-18 over a normalized log-power spectrogram with a 7x7 stride-2
/// convolutional front end, max pooling and a linear score head. No batch
/// normalization; every convolution has a bias.
///
/// Inputs are F*L x B: column b is the F x L spectrogram flattened
/// column-major, which the network sees as an L (time) by F (frequency) image.
template <typename ScalarT>
class PowerCritic {
 public:
  using Scalar = ScalarT;
  PowerCritic(const PowerCriticConfig& config, Rng& rng);

  nn::Vector<Scalar> forward(const nn::Matrix<Scalar>& x);
  nn::Vector<Scalar> forward_tangent(const nn::Matrix<Scalar>& v);
  nn::Matrix<Scalar> backward(const nn::Vector<Scalar>& weights, bool param_grads);

  ParameterList<Scalar> parameters();
  Index input_size() const { return config_.num_bins * config_.num_frames; }
  const PowerCriticConfig& config() const { return config_; }

 private:
  FeatureMap<Scalar> as_map(const nn::Matrix<Scalar>& x) const;

  PowerCriticConfig config_;
  nn::Conv2d<Scalar> frontend_;
  nn::Relu<Scalar> frontend_relu_;
  nn::MaxPool2d<Scalar> frontend_pool_;
  ResNet18Trunk<Scalar> trunk_;
  nn::Linear<Scalar> head_;
  Index batch_ = 0;
};

/// Single-input conveniences; shape errors name the expected size.
template <typename Scalar>
double critic_wave(WaveCritic<Scalar>& net, const Waveform& clip);

template <typename Scalar>
double critic_power(PowerCritic<Scalar>& net, const NormalizedSpectrogram& spec);

}  // namespace v2s::model

#endif  // V2S_MODEL_CRITICS_HPP_
