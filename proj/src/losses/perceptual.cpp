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

#include "v2s/losses/perceptual.hpp"

#include <cmath>
#include <vector>

#include "v2s/core/error.hpp"
#include "v2s/core/rng.hpp"

namespace v2s::losses {

namespace {

struct LayerShape {
  int out_channels;
  int kernel;
  int stride;
};
constexpr LayerShape kShapes[FallbackExtractor::kNumLayers] = {{32, 64, 10}, {64, 8, 4}, {64, 8, 4}};

// Stream id separating extractor weights from every other consumer of a seed.
constexpr std::uint64_t kExtractorStream = 0x5e4f;

Eigen::MatrixXd patches(const Eigen::MatrixXd& a, int kernel, int stride, Eigen::Index frames) {
  const Eigen::Index c = a.cols();
  Eigen::MatrixXd p(frames, c * kernel);
  for (Eigen::Index ci = 0; ci < c; ++ci)
    for (int k = 0; k < kernel; ++k)
      for (Eigen::Index t = 0; t < frames; ++t) p(t, ci * kernel + k) = a(t * stride + k, ci);
  return p;
}

Eigen::Index out_frames(Eigen::Index len, int kernel, int stride) {
  return len < kernel ? 0 : (len - kernel) / stride + 1;
}

}  // namespace

FallbackExtractor::FallbackExtractor(std::uint64_t seed) : seed_(seed) {
  Rng rng(seed, kExtractorStream);
  int in = 1;
  for (int l = 0; l < kNumLayers; ++l) {
    Layer& layer = layers_[static_cast<size_t>(l)];
    layer.in_channels = in;
    layer.out_channels = kShapes[l].out_channels;
    layer.kernel = kShapes[l].kernel;
    layer.stride = kShapes[l].stride;
    const int fan_in = in * layer.kernel;
    // Gain 2 keeps tanh units away from both the linear and saturated regimes
    // for speech-level inputs.
    const double bound = 2.0 * std::sqrt(3.0 / fan_in);
    layer.weight.resize(fan_in, layer.out_channels);
    for (auto& w : layer.weight.reshaped()) w = rng.uniform(-bound, bound);
    layer.bias.resize(layer.out_channels);
    for (auto& b : layer.bias) b = rng.uniform(-0.1, 0.1);
    in = layer.out_channels;
  }
}

std::string FallbackExtractor::id() const { return "fallback-conv-tanh/seed=" + std::to_string(seed_); }

Eigen::Index FallbackExtractor::min_length() const {
  Eigen::Index len = 1;
  for (int l = kNumLayers - 1; l >= 0; --l) {
    const Layer& layer = layers_[static_cast<size_t>(l)];
    len = (len - 1) * layer.stride + layer.kernel;
  }
  return len;
}

Eigen::MatrixXd FallbackExtractor::features(const Eigen::VectorXd& samples) {
  if (samples.size() < min_length()) {
    throw ShapeError("perceptual extractor needs at least " + std::to_string(min_length()) + " samples, got " +
                     std::to_string(samples.size()));
  }
  Eigen::MatrixXd a = samples;
  for (const Layer& layer : layers_) {
    const Eigen::Index frames = out_frames(a.rows(), layer.kernel, layer.stride);
    Eigen::MatrixXd pre = patches(a, layer.kernel, layer.stride, frames) * layer.weight;
    pre.rowwise() += layer.bias;
    a = pre.array().tanh().matrix();
  }
  return a;
}

Eigen::VectorXd FallbackExtractor::features_vjp(const Eigen::VectorXd& samples, const Eigen::MatrixXd& grad) {
  if (samples.size() < min_length()) throw ShapeError("perceptual extractor input is too short");
  std::vector<Eigen::MatrixXd> acts{samples};
  for (const Layer& layer : layers_) {
    const Eigen::MatrixXd& a = acts.back();
    const Eigen::Index frames = out_frames(a.rows(), layer.kernel, layer.stride);
    Eigen::MatrixXd pre = patches(a, layer.kernel, layer.stride, frames) * layer.weight;
    pre.rowwise() += layer.bias;
    acts.push_back(pre.array().tanh().matrix());
  }
  if (grad.rows() != acts.back().rows() || grad.cols() != acts.back().cols()) {
    throw ShapeError("perceptual extractor gradient shape mismatch");
  }
  Eigen::MatrixXd g = grad;
  for (int l = kNumLayers - 1; l >= 0; --l) {
    const Layer& layer = layers_[static_cast<size_t>(l)];
    const Eigen::MatrixXd& out = acts[static_cast<size_t>(l) + 1];
    const Eigen::MatrixXd dpre = (g.array() * (1.0 - out.array().square())).matrix();
    const Eigen::MatrixXd dp = dpre * layer.weight.transpose();
    const Eigen::MatrixXd& in = acts[static_cast<size_t>(l)];
    Eigen::MatrixXd din = Eigen::MatrixXd::Zero(in.rows(), in.cols());
    for (Eigen::Index ci = 0; ci < in.cols(); ++ci)
      for (int k = 0; k < layer.kernel; ++k)
        for (Eigen::Index t = 0; t < dp.rows(); ++t) din(t * layer.stride + k, ci) += dp(t, ci * layer.kernel + k);
    g = std::move(din);
  }
  return g.col(0);
}

std::unique_ptr<PerceptualExtractor> fallback_extractor(std::uint64_t seed) {
  return std::make_unique<FallbackExtractor>(seed);
}

}  // namespace v2s::losses
