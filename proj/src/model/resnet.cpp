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

#include "v2s/model/resnet.hpp"

#include <cmath>

#include "v2s/core/error.hpp"

namespace v2s::model {

Index scaled_width(Index nominal, double scale, Index floor) {
  return std::max<Index>(floor, static_cast<Index>(std::lround(static_cast<double>(nominal) * scale)));
}

namespace {

nn::Conv2dOptions conv3x3(Index in, Index out, Index stride, bool bias) {
  nn::Conv2dOptions o;
  o.in_channels = in;
  o.out_channels = out;
  o.kernel_h = o.kernel_w = 3;
  o.stride_h = o.stride_w = stride;
  o.pad_h = o.pad_w = 1;
  o.bias = bias;
  return o;
}

nn::Conv2dOptions conv1x1(Index in, Index out, Index stride, bool bias) {
  nn::Conv2dOptions o;
  o.in_channels = in;
  o.out_channels = out;
  o.stride_h = o.stride_w = stride;
  o.bias = bias;
  return o;
}

}  // namespace

template <typename Scalar>
BasicBlock<Scalar>::BasicBlock(const std::string& name, Index in, Index out, Index stride,
                               bool batch_norm, Rng& rng)
    : batch_norm_(batch_norm),
      conv1_(name + ".conv1", conv3x3(in, out, stride, !batch_norm), rng),
      conv2_(name + ".conv2", conv3x3(out, out, 1, !batch_norm), rng) {
  if (stride != 1 || in != out) {
    shortcut_.emplace(name + ".shortcut", conv1x1(in, out, stride, !batch_norm), rng);
  }
  if (batch_norm_) {
    bn1_.emplace(name + ".bn1", out);
    bn2_.emplace(name + ".bn2", out);
    if (shortcut_) bn_shortcut_.emplace(name + ".bn_shortcut", out);
  }
}

template <typename Scalar>
void BasicBlock<Scalar>::collect(ParameterList<Scalar>& out) {
  conv1_.collect(out);
  if (bn1_) bn1_->collect(out);
  conv2_.collect(out);
  if (bn2_) bn2_->collect(out);
  if (shortcut_) shortcut_->collect(out);
  if (bn_shortcut_) bn_shortcut_->collect(out);
}

template <typename Scalar>
FeatureMap<Scalar> BasicBlock<Scalar>::forward(const FeatureMap<Scalar>& x, Mode mode) {
  FeatureMap<Scalar> h = conv1_.forward(x);
  if (bn1_) h = bn1_->forward(h, mode);
  h = relu1_.forward(h);
  h = conv2_.forward(h);
  if (bn2_) h = bn2_->forward(h, mode);
  if (shortcut_) {
    FeatureMap<Scalar> s = shortcut_->forward(x);
    if (bn_shortcut_) s = bn_shortcut_->forward(s, mode);
    h.data += s.data;
  } else {
    h.data += x.data;
  }
  return relu2_.forward(h);
}

template <typename Scalar>
FeatureMap<Scalar> BasicBlock<Scalar>::forward_tangent(const FeatureMap<Scalar>& v) {
  if (batch_norm_) throw ConfigError("forward_tangent is undefined for batch-normalized blocks");
  FeatureMap<Scalar> h = relu1_.forward_tangent(conv1_.forward_tangent(v));
  h = conv2_.forward_tangent(h);
  if (shortcut_) {
    h.data += shortcut_->forward_tangent(v).data;
  } else {
    h.data += v.data;
  }
  return relu2_.forward_tangent(h);
}

template <typename Scalar>
FeatureMap<Scalar> BasicBlock<Scalar>::backward(const FeatureMap<Scalar>& grad, bool param_grads) {
  const FeatureMap<Scalar> g = relu2_.backward(grad);
  FeatureMap<Scalar> gh = g;
  if (bn2_) gh = bn2_->backward(gh, param_grads);
  gh = conv2_.backward(gh, param_grads);
  gh = relu1_.backward(gh);
  if (bn1_) gh = bn1_->backward(gh, param_grads);
  gh = conv1_.backward(gh, param_grads);
  if (shortcut_) {
    FeatureMap<Scalar> gs = g;
    if (bn_shortcut_) gs = bn_shortcut_->backward(gs, param_grads);
    gh.data += shortcut_->backward(gs, param_grads).data;
  } else {
    gh.data += g.data;
  }
  return gh;
}

template <typename Scalar>
ResNet18Trunk<Scalar>::ResNet18Trunk(const std::string& name, Index in_channels, Index base_width,
                                     bool batch_norm, Rng& rng) {
  Index in = in_channels;
  for (int stage = 0; stage < 4; ++stage) {
    const Index width = base_width << stage;
    const Index stride = stage == 0 ? 1 : 2;
    const std::string prefix = name + ".layer" + std::to_string(stage + 1);
    blocks_.emplace_back(prefix + ".0", in, width, stride, batch_norm, rng);
    blocks_.emplace_back(prefix + ".1", width, width, 1, batch_norm, rng);
    in = width;
  }
  output_dim_ = in;
}

template <typename Scalar>
void ResNet18Trunk<Scalar>::collect(ParameterList<Scalar>& out) {
  for (auto& b : blocks_) b.collect(out);
}

template <typename Scalar>
FeatureMap<Scalar> ResNet18Trunk<Scalar>::forward(const FeatureMap<Scalar>& x, Mode mode) {
  FeatureMap<Scalar> h = x;
  for (auto& b : blocks_) h = b.forward(h, mode);
  return pool_.forward(h);
}

template <typename Scalar>
FeatureMap<Scalar> ResNet18Trunk<Scalar>::forward_tangent(const FeatureMap<Scalar>& v) {
  FeatureMap<Scalar> h = v;
  for (auto& b : blocks_) h = b.forward_tangent(h);
  return pool_.forward_tangent(h);
}

template <typename Scalar>
FeatureMap<Scalar> ResNet18Trunk<Scalar>::backward(const FeatureMap<Scalar>& grad, bool param_grads) {
  FeatureMap<Scalar> g = pool_.backward(grad);
  for (size_t i = blocks_.size(); i-- > 0;) g = blocks_[i].backward(g, param_grads);
  return g;
}

template class BasicBlock<float>;
template class BasicBlock<double>;
template class ResNet18Trunk<float>;
template class ResNet18Trunk<double>;

}  // namespace v2s::model
