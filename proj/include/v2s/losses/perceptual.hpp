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

#ifndef V2S_LOSSES_PERCEPTUAL_HPP_
#define V2S_LOSSES_PERCEPTUAL_HPP_

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "v2s/core/types.hpp"

namespace v2s::losses {

/// Frozen waveform feature extractor for the perceptual loss. Implementations
/// may wrap an external pre-trained model; they are never trained here.
class PerceptualExtractor {
 public:
  virtual ~PerceptualExtractor() = default;

  /// frames x feature_dim.
  virtual Eigen::MatrixXd features(const Eigen::VectorXd& samples) = 0;
  /// Gradient w.r.t. the samples of sum(grad .* features(samples)).
  /// Throws DifferentiationError when the extractor cannot provide one.
  virtual Eigen::VectorXd features_vjp(const Eigen::VectorXd& samples, const Eigen::MatrixXd& grad) = 0;
  virtual std::string id() const = 0;
  virtual bool deterministic() const { return true; }

  Eigen::MatrixXd features(const Waveform& w) { return features(w.samples()); }
};

/// Stand-in perceptual extractor: three randomly initialized strided 1-D
/// convolutions with tanh activations (kernel/stride 64/10, 8/4, 8/4 and
/// 32, 64, 64 channels, hop 160 samples). Deterministic from its seed and
/// frozen. It is not PASE and carries none of its learned structure; it
/// exists so the perceptual-loss machinery can run without external assets.
class FallbackExtractor final : public PerceptualExtractor {
 public:
  struct Layer {
    int in_channels;
    int out_channels;
    int kernel;
    int stride;
    Eigen::MatrixXd weight;  // (in_channels * kernel) x out_channels, row ci * kernel + k
    Eigen::RowVectorXd bias;
  };
  static constexpr int kNumLayers = 3;

  explicit FallbackExtractor(std::uint64_t seed);

  Eigen::MatrixXd features(const Eigen::VectorXd& samples) override;
  Eigen::VectorXd features_vjp(const Eigen::VectorXd& samples, const Eigen::MatrixXd& grad) override;
  std::string id() const override;
  using PerceptualExtractor::features;

  const std::array<Layer, kNumLayers>& layers() const { return layers_; }
  /// Shortest input producing one feature frame.
  Eigen::Index min_length() const;

 private:
  std::uint64_t seed_;
  std::array<Layer, kNumLayers> layers_;
};

std::unique_ptr<PerceptualExtractor> fallback_extractor(std::uint64_t seed);

}  // namespace v2s::losses

#endif  // V2S_LOSSES_PERCEPTUAL_HPP_
