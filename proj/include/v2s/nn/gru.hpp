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

#ifndef V2S_NN_GRU_HPP_
#define V2S_NN_GRU_HPP_

#include <memory>
#include <string>
#include <vector>

#include "v2s/nn/tensor.hpp"

namespace v2s::nn {

/// One direction of a GRU layer with the gate order (reset, update, new):
///   r = sigmoid(x W_ir + b_ir + h W_hr + b_hr)
///   z = sigmoid(x W_iz + b_iz + h W_hz + b_hz)
///   n = tanh(x W_in + b_in + r * (h W_hn + b_hn))
///   h' = (1 - z) * n + z * h
/// Sequences are stored as (batch * steps) x features with row b * steps + t.
template <typename Scalar>
class GruDirection {
 public:
  GruDirection(std::string name, Index input_dim, Index hidden, bool reverse, Rng& rng);

  Matrix<Scalar> forward(const Matrix<Scalar>& x, Index batch, Index steps);
  Matrix<Scalar> backward(const Matrix<Scalar>& grad, bool param_grads = true);
  void collect(ParameterList<Scalar>& out);

  Index hidden() const { return hidden_; }

  Parameter<Scalar> weight_ih;  // input x 3H
  Parameter<Scalar> weight_hh;  // H x 3H
  Parameter<Scalar> bias_ih;
  Parameter<Scalar> bias_hh;

 private:
  Index hidden_;
  bool reverse_;
  Index batch_ = 0, steps_ = 0;
  Matrix<Scalar> input_;
  // Per processing step s, rows [s*batch, (s+1)*batch).
  Matrix<Scalar> r_, z_, n_, hn_, h_prev_;
};

/// Stacked bidirectional GRU; each layer's output concatenates the forward
/// and backward hidden states (2H features).
template <typename Scalar>
class BiGru {
 public:
  BiGru(std::string name, Index input_dim, Index hidden, Index num_layers, Rng& rng);

  Matrix<Scalar> forward(const Matrix<Scalar>& x, Index batch, Index steps);
  Matrix<Scalar> backward(const Matrix<Scalar>& grad, bool param_grads = true);
  void collect(ParameterList<Scalar>& out);
  Index output_dim() const { return 2 * hidden_; }

 private:
  Index hidden_;
  std::vector<GruDirection<Scalar>> forward_dirs_;
  std::vector<GruDirection<Scalar>> backward_dirs_;
};

}  // namespace v2s::nn

#endif  // V2S_NN_GRU_HPP_
