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

#ifndef V2S_NN_TENSOR_HPP_
#define V2S_NN_TENSOR_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "v2s/core/rng.hpp"

namespace v2s::nn {

using Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Batch of feature maps stored as a (batch * height * width) x channels
/// matrix. Row index is n * height * width + y * width + x, so every channel
/// of every sample is one contiguous plane. 1-D signals use height == 1.
template <typename Scalar>
struct FeatureMap {
  Matrix<Scalar> data;
  Index batch = 0;
  Index height = 1;
  Index width = 1;

  FeatureMap() = default;
  FeatureMap(Index batch_, Index height_, Index width_, Index channels)
      : data(batch_ * height_ * width_, channels), batch(batch_), height(height_), width(width_) {}

  Index channels() const { return data.cols(); }
  Index plane() const { return height * width; }
  bool same_shape(const FeatureMap& o) const {
    return batch == o.batch && height == o.height && width == o.width &&
           channels() == o.channels();
  }
};

/// kTrain: batch statistics, running statistics updated.
/// kForward: batch statistics, running statistics untouched.
/// kEval: running statistics.
enum class Mode { kTrain, kForward, kEval };

template <typename Scalar>
struct Parameter {
  std::string name;
  Matrix<Scalar> value;
  Matrix<Scalar> grad;
  /// Buffers (e.g. running statistics) are serialized but never optimized.
  bool trainable = true;

  Parameter() = default;
  Parameter(std::string n, Index rows, Index cols, bool train = true)
      : name(std::move(n)),
        value(Matrix<Scalar>::Zero(rows, cols)),
        grad(Matrix<Scalar>::Zero(rows, cols)),
        trainable(train) {}
  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

template <typename Scalar>
using ParameterList = std::vector<Parameter<Scalar>*>;

template <typename Scalar>
void zero_grads(const ParameterList<Scalar>& params) {
  for (auto* p : params) p->zero_grad();
}

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)), the usual default for
/// convolution and linear layers.
template <typename Scalar>
void init_uniform_fan_in(Matrix<Scalar>& m, Index fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<Scalar>(rng.uniform(-bound, bound));
}

/// FNV-1a over the raw bytes of every value; used for isolation checks.
template <typename Scalar>
std::uint64_t checksum(const ParameterList<Scalar>& params) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto* p : params) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(p->value.data());
    const size_t n = static_cast<size_t>(p->value.size()) * sizeof(Scalar);
    for (size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace v2s::nn

#endif  // V2S_NN_TENSOR_HPP_
