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

#ifndef V2S_LOSSES_CRITIC_HPP_
#define V2S_LOSSES_CRITIC_HPP_

#include <Eigen/Dense>

#include "v2s/core/error.hpp"
#include "v2s/model/critics.hpp"

namespace v2s::losses {

/// A batch critic as seen by the objectives. Inputs hold one sample per
/// column. Calls are stateful: backward() and tangent() refer to the most
/// recent scores() input.
class Critic {
 public:
  virtual ~Critic() = default;

  virtual Eigen::VectorXd scores(const Eigen::MatrixXd& x) = 0;

  /// Gradient of sum_b weights[b] * score_b w.r.t. the last input. With
  /// param_grads, the same quantity's parameter gradient is accumulated.
  virtual Eigen::MatrixXd backward(const Eigen::VectorXd& weights, bool param_grads) = 0;

  /// Per-sample directional derivative <v_b, grad D(x_b)> at the last input.
  /// A following backward(w, true) accumulates the parameter gradient of
  /// sum_b w_b <v_b, grad D(x_b)>.
  virtual Eigen::VectorXd tangent(const Eigen::MatrixXd& v) = 0;

  virtual bool differentiable() const { return true; }
};

/// Adapts a network critic (WaveCritic or PowerCritic) to the interface.
template <typename Net>
class NetworkCritic final : public Critic {
 public:
  using Scalar = typename Net::Scalar;

  explicit NetworkCritic(Net& net) : net_(net) {}

  Eigen::VectorXd scores(const Eigen::MatrixXd& x) override {
    return net_.forward(x.template cast<Scalar>()).template cast<double>();
  }
  Eigen::MatrixXd backward(const Eigen::VectorXd& weights, bool param_grads) override {
    return net_.backward(weights.template cast<Scalar>(), param_grads).template cast<double>();
  }
  Eigen::VectorXd tangent(const Eigen::MatrixXd& v) override {
    return net_.forward_tangent(v.template cast<Scalar>()).template cast<double>();
  }

 private:
  Net& net_;
};

template <typename Net>
NetworkCritic(Net&) -> NetworkCritic<Net>;

}  // namespace v2s::losses

#endif  // V2S_LOSSES_CRITIC_HPP_
