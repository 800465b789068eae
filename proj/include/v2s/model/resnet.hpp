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

#ifndef V2S_MODEL_RESNET_HPP_
#define V2S_MODEL_RESNET_HPP_

#include <optional>
#include <string>
#include <vector>

#include "v2s/nn/layers.hpp"

namespace v2s::model {

using nn::FeatureMap;
using nn::Index;
using nn::Mode;
using nn::ParameterList;

/// Two 3x3 convolutions with a residual connection. With batch_norm = false
/// the convolutions carry biases and the block supports forward_tangent().
template <typename Scalar>
class BasicBlock {
 public:
  BasicBlock(const std::string& name, Index in, Index out, Index stride, bool batch_norm, Rng& rng);

  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x, Mode mode);
  FeatureMap<Scalar> forward_tangent(const FeatureMap<Scalar>& v);
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad, bool param_grads);
  void collect(ParameterList<Scalar>& out);

 private:
  bool batch_norm_;
  nn::Conv2d<Scalar> conv1_;
  nn::Conv2d<Scalar> conv2_;
  std::optional<nn::Conv2d<Scalar>> shortcut_;
  std::optional<nn::BatchNorm<Scalar>> bn1_, bn2_, bn_shortcut_;
  nn::Relu<Scalar> relu1_, relu2_;
};

/// ResNet-18 body: four stages of two basic blocks (four convolutions per
/// stage) with widths base, 2 base, 4 base, 8 base, followed by global
/// average pooling to one 8*base vector per sample.
template <typename Scalar>
class ResNet18Trunk {
 public:
  ResNet18Trunk(const std::string& name, Index in_channels, Index base_width, bool batch_norm,
                Rng& rng);

  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x, Mode mode);
  FeatureMap<Scalar> forward_tangent(const FeatureMap<Scalar>& v);
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad, bool param_grads);
  void collect(ParameterList<Scalar>& out);
  Index output_dim() const { return output_dim_; }

 private:
  std::vector<BasicBlock<Scalar>> blocks_;
  nn::GlobalAvgPool<Scalar> pool_;
  Index output_dim_;
};

/// Rounds a nominal channel count by the width scale, never below `floor`.
Index scaled_width(Index nominal, double scale, Index floor = 4);

}  // namespace v2s::model

#endif  // V2S_MODEL_RESNET_HPP_
