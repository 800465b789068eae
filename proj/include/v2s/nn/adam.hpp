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

#ifndef V2S_NN_ADAM_HPP_
#define V2S_NN_ADAM_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "v2s/nn/tensor.hpp"

namespace v2s::nn {

/// Adam with bias correction. Non-trainable entries of the list are skipped.
template <typename Scalar>
class Adam {
 public:
  Adam(ParameterList<Scalar> params, double lr, double beta1, double beta2, double eps = 1e-8)
      : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (auto* p : params_) {
      m_.push_back(Matrix<Scalar>::Zero(p->value.rows(), p->value.cols()));
      v_.push_back(Matrix<Scalar>::Zero(p->value.rows(), p->value.cols()));
    }
  }

  void zero_grad() { zero_grads(params_); }

  void step() {
    ++steps_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
    const Scalar b1 = static_cast<Scalar>(beta1_);
    const Scalar b2 = static_cast<Scalar>(beta2_);
    const Scalar step_size = static_cast<Scalar>(lr_ / c1);
    const Scalar inv_sqrt_c2 = static_cast<Scalar>(1.0 / std::sqrt(c2));
    const Scalar eps = static_cast<Scalar>(eps_);
    for (size_t i = 0; i < params_.size(); ++i) {
      Parameter<Scalar>& p = *params_[i];
      if (!p.trainable) continue;
      m_[i] = b1 * m_[i] + (Scalar(1) - b1) * p.grad;
      v_[i] = b2 * v_[i] + (Scalar(1) - b2) * p.grad.cwiseAbs2();
      p.value.array() -=
          step_size * m_[i].array() / (v_[i].array().sqrt() * inv_sqrt_c2 + eps);
    }
  }

  std::int64_t steps() const { return steps_; }
  void set_steps(std::int64_t s) { steps_ = s; }
  std::vector<Matrix<Scalar>>& first_moments() { return m_; }
  std::vector<Matrix<Scalar>>& second_moments() { return v_; }
  const ParameterList<Scalar>& parameters() const { return params_; }

 private:
  ParameterList<Scalar> params_;
  double lr_, beta1_, beta2_, eps_;
  std::int64_t steps_ = 0;
  std::vector<Matrix<Scalar>> m_;
  std::vector<Matrix<Scalar>> v_;
};

}  // namespace v2s::nn

#endif  // V2S_NN_ADAM_HPP_
