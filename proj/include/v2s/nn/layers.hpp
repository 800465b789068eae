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

#ifndef V2S_NN_LAYERS_HPP_
#define V2S_NN_LAYERS_HPP_

#include <string>
#include <vector>

#include "v2s/nn/tensor.hpp"

namespace v2s::nn {

// Layers cache what their backward pass needs during forward(); backward()
// must follow the matching forward(). Layers used inside critics also offer
// forward_tangent(): the map v -> J v of the last forward() (biases dropped,
// activation masks and pooling choices frozen). Calling backward() after
// forward_tangent() yields parameter gradients of the tangent output, which
// is what a gradient penalty on a piecewise-linear critic needs.

struct Conv2dOptions {
  Index in_channels = 1;
  Index out_channels = 1;
  Index kernel_h = 1;
  Index kernel_w = 1;
  Index stride_h = 1;
  Index stride_w = 1;
  Index pad_h = 0;
  Index pad_w = 0;
  Index groups = 1;
  bool bias = true;
  /// False for the first layer of a network whose input needs no gradient.
  bool input_grad = true;
};

/// Grouped 2-D convolution with zero padding (1-D when kernel_h == 1).
/// Weight layout: (in_channels/groups * kernel_h * kernel_w) x out_channels.
template <typename Scalar>
class Conv2d {
 public:
  Conv2d(std::string name, const Conv2dOptions& options, Rng& rng);

  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x);
  FeatureMap<Scalar> forward_tangent(const FeatureMap<Scalar>& v);
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad, bool param_grads = true);
  void collect(ParameterList<Scalar>& out);

  const Conv2dOptions& options() const { return opt_; }
  Index out_height(Index h) const { return (h + 2 * opt_.pad_h - opt_.kernel_h) / opt_.stride_h + 1; }
  Index out_width(Index w) const { return (w + 2 * opt_.pad_w - opt_.kernel_w) / opt_.stride_w + 1; }

  Parameter<Scalar> weight;
  Parameter<Scalar> bias;

 private:
  FeatureMap<Scalar> apply(const FeatureMap<Scalar>& x, bool with_bias);
  void im2col(const FeatureMap<Scalar>& x, Index group, Index n0, Index n1, Matrix<Scalar>& cols) const;
  void col2im(const Matrix<Scalar>& cols, Index group, Index n0, Index n1, FeatureMap<Scalar>& gx) const;
  Index chunk_samples(Index ho, Index wo) const;

  Conv2dOptions opt_;
  FeatureMap<Scalar> input_;
  bool tangent_ = false;
};

/// 1-D transposed convolution over (batch, length) maps with height 1.
/// Output length (L_in - 1) * stride - 2 * pad + kernel.
template <typename Scalar>
class ConvTranspose1d {
 public:
  ConvTranspose1d(std::string name, Index in_channels, Index out_channels, Index kernel,
                  Index stride, Index pad, bool bias, Rng& rng);

  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x);
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad, bool param_grads = true);
  void collect(ParameterList<Scalar>& out);
  Index out_length(Index lin) const { return (lin - 1) * stride_ + kernel_ - 2 * pad_; }

  Parameter<Scalar> weight;  // in x (out * kernel), column index co * kernel + k
  Parameter<Scalar> bias;

 private:
  Index in_, out_, kernel_, stride_, pad_;
  bool has_bias_;
  FeatureMap<Scalar> input_;
};

/// Per-channel batch normalization over every row of the feature map.
template <typename Scalar>
class BatchNorm {
 public:
  BatchNorm(std::string name, Index channels, double momentum = 0.1, double eps = 1e-5);

  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x, Mode mode);
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad, bool param_grads = true);
  void collect(ParameterList<Scalar>& out);

  Parameter<Scalar> gamma;
  Parameter<Scalar> beta;
  Parameter<Scalar> running_mean;
  Parameter<Scalar> running_var;

 private:
  double momentum_, eps_;
  Matrix<Scalar> normalized_;
  RowVector<Scalar> inv_std_;
  bool batch_stats_ = true;
};

template <typename Scalar>
class Relu {
 public:
  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x);
  FeatureMap<Scalar> forward_tangent(const FeatureMap<Scalar>& v) const;
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad) const;

 private:
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> active_;
};

template <typename Scalar>
class LeakyRelu {
 public:
  explicit LeakyRelu(double slope = 0.2) : slope_(static_cast<Scalar>(slope)) {}
  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x);
  FeatureMap<Scalar> forward_tangent(const FeatureMap<Scalar>& v) const;
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad) const;

 private:
  Scalar slope_;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> positive_;
};

template <typename Scalar>
class Tanh {
 public:
  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x);
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad) const;

 private:
  Matrix<Scalar> output_;
};

/// Spatial max pooling with zero-free (-inf) padding.
template <typename Scalar>
class MaxPool2d {
 public:
  MaxPool2d(Index kernel = 3, Index stride = 2, Index pad = 1)
      : kernel_(kernel), stride_(stride), pad_(pad) {}
  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x);
  FeatureMap<Scalar> forward_tangent(const FeatureMap<Scalar>& v) const;
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad) const;
  Index out_size(Index n) const { return (n + 2 * pad_ - kernel_) / stride_ + 1; }

 private:
  Index kernel_, stride_, pad_;
  Index in_h_ = 0, in_w_ = 0;
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> argmax_;  // row index into the input
};

/// Mean over each sample's plane: (N*H*W x C) -> (N x C), height = width = 1.
template <typename Scalar>
class GlobalAvgPool {
 public:
  FeatureMap<Scalar> forward(const FeatureMap<Scalar>& x);
  FeatureMap<Scalar> forward_tangent(const FeatureMap<Scalar>& v) { return forward(v); }
  FeatureMap<Scalar> backward(const FeatureMap<Scalar>& grad) const;

 private:
  Index h_ = 1, w_ = 1;
};

/// Affine map over rows: y = x W + b, W is in x out.
template <typename Scalar>
class Linear {
 public:
  Linear(std::string name, Index in, Index out, bool bias, Rng& rng);
  Matrix<Scalar> forward(const Matrix<Scalar>& x);
  Matrix<Scalar> forward_tangent(const Matrix<Scalar>& v);
  Matrix<Scalar> backward(const Matrix<Scalar>& grad, bool param_grads = true);
  void collect(ParameterList<Scalar>& out);

  Parameter<Scalar> weight;
  Parameter<Scalar> bias;

 private:
  bool has_bias_;
  bool tangent_ = false;
  Matrix<Scalar> input_;
};

}  // namespace v2s::nn

#endif  // V2S_NN_LAYERS_HPP_
