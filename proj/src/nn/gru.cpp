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

#include "v2s/nn/gru.hpp"

#include "v2s/core/error.hpp"

namespace v2s::nn {

namespace {

template <typename Scalar>
Matrix<Scalar> sigmoid(const Matrix<Scalar>& a) {
  return (Scalar(1) / (Scalar(1) + (-a.array()).exp())).matrix();
}

}  // namespace

template <typename Scalar>
GruDirection<Scalar>::GruDirection(std::string name, Index input_dim, Index hidden, bool reverse,
                                   Rng& rng)
    : weight_ih(name + ".weight_ih", input_dim, 3 * hidden),
      weight_hh(name + ".weight_hh", hidden, 3 * hidden),
      bias_ih(name + ".bias_ih", 1, 3 * hidden),
      bias_hh(name + ".bias_hh", 1, 3 * hidden),
      hidden_(hidden),
      reverse_(reverse) {
  init_uniform_fan_in(weight_ih.value, hidden, rng);
  init_uniform_fan_in(weight_hh.value, hidden, rng);
  init_uniform_fan_in(bias_ih.value, hidden, rng);
  init_uniform_fan_in(bias_hh.value, hidden, rng);
}

template <typename Scalar>
void GruDirection<Scalar>::collect(ParameterList<Scalar>& out) {
  out.push_back(&weight_ih);
  out.push_back(&weight_hh);
  out.push_back(&bias_ih);
  out.push_back(&bias_hh);
}

template <typename Scalar>
Matrix<Scalar> GruDirection<Scalar>::forward(const Matrix<Scalar>& x, Index batch, Index steps) {
  if (x.rows() != batch * steps || x.cols() != weight_ih.value.rows()) {
    throw ShapeError(weight_ih.name + ": input shape mismatch");
  }
  const Index h = hidden_;
  input_ = x;
  batch_ = batch;
  steps_ = steps;
  Matrix<Scalar> xi = x * weight_ih.value;
  xi.rowwise() += bias_ih.value.row(0);

  r_.resize(steps * batch, h);
  z_.resize(steps * batch, h);
  n_.resize(steps * batch, h);
  hn_.resize(steps * batch, h);
  h_prev_.resize(steps * batch, h);

  Matrix<Scalar> out(batch * steps, h);
  Matrix<Scalar> state = Matrix<Scalar>::Zero(batch, h);
  Matrix<Scalar> xs(batch, 3 * h);
  Matrix<Scalar> gh(batch, 3 * h);
  for (Index s = 0; s < steps; ++s) {
    const Index t = reverse_ ? steps - 1 - s : s;
    for (Index b = 0; b < batch; ++b) xs.row(b) = xi.row(b * steps + t);
    gh.noalias() = state * weight_hh.value;
    gh.rowwise() += bias_hh.value.row(0);
    const Matrix<Scalar> r = sigmoid<Scalar>(xs.leftCols(h) + gh.leftCols(h));
    const Matrix<Scalar> z = sigmoid<Scalar>(xs.middleCols(h, h) + gh.middleCols(h, h));
    const Matrix<Scalar> hn = gh.rightCols(h);
    const Matrix<Scalar> n =
        (xs.rightCols(h).array() + r.array() * hn.array()).tanh().matrix();
    r_.middleRows(s * batch, batch) = r;
    z_.middleRows(s * batch, batch) = z;
    n_.middleRows(s * batch, batch) = n;
    hn_.middleRows(s * batch, batch) = hn;
    h_prev_.middleRows(s * batch, batch) = state;
    state = ((Scalar(1) - z.array()) * n.array() + z.array() * state.array()).matrix();
    for (Index b = 0; b < batch; ++b) out.row(b * steps + t) = state.row(b);
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> GruDirection<Scalar>::backward(const Matrix<Scalar>& grad, bool param_grads) {
  const Index h = hidden_;
  const Index batch = batch_, steps = steps_;
  if (grad.rows() != batch * steps || grad.cols() != h) {
    throw ShapeError(weight_ih.name + ": gradient shape mismatch");
  }
  Matrix<Scalar> dxi(batch * steps, 3 * h);
  Matrix<Scalar> dh = Matrix<Scalar>::Zero(batch, h);
  Matrix<Scalar> dgh(batch, 3 * h);
  for (Index s = steps - 1; s >= 0; --s) {
    const Index t = reverse_ ? steps - 1 - s : s;
    for (Index b = 0; b < batch; ++b) dh.row(b) += grad.row(b * steps + t);
    const auto r = r_.middleRows(s * batch, batch).array();
    const auto z = z_.middleRows(s * batch, batch).array();
    const auto n = n_.middleRows(s * batch, batch).array();
    const auto hn = hn_.middleRows(s * batch, batch).array();
    const auto hp = h_prev_.middleRows(s * batch, batch);

    const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> dn_pre =
        dh.array() * (Scalar(1) - z) * (Scalar(1) - n.square());
    const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> dz_pre =
        dh.array() * (hp.array() - n) * z * (Scalar(1) - z);
    const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> dr_pre = dn_pre * hn * r * (Scalar(1) - r);

    dgh.leftCols(h) = dr_pre.matrix();
    dgh.middleCols(h, h) = dz_pre.matrix();
    dgh.rightCols(h) = (dn_pre * r).matrix();
    for (Index b = 0; b < batch; ++b) {
      auto row = dxi.row(b * steps + t);
      row.leftCols(h) = dr_pre.row(b).matrix();
      row.middleCols(h, h) = dz_pre.row(b).matrix();
      row.rightCols(h) = dn_pre.row(b).matrix();
    }
    if (param_grads) {
      weight_hh.grad.noalias() += hp.transpose() * dgh;
      bias_hh.grad.row(0) += dgh.colwise().sum();
    }
    dh = (dh.array() * z).matrix();
    dh.noalias() += dgh * weight_hh.value.transpose();
  }
  if (param_grads) {
    weight_ih.grad.noalias() += input_.transpose() * dxi;
    bias_ih.grad.row(0) += dxi.colwise().sum();
  }
  return dxi * weight_ih.value.transpose();
}

template <typename Scalar>
BiGru<Scalar>::BiGru(std::string name, Index input_dim, Index hidden, Index num_layers, Rng& rng)
    : hidden_(hidden) {
  for (Index l = 0; l < num_layers; ++l) {
    const Index in = l == 0 ? input_dim : 2 * hidden;
    const std::string prefix = name + ".l" + std::to_string(l);
    forward_dirs_.emplace_back(prefix + ".fwd", in, hidden, false, rng);
    backward_dirs_.emplace_back(prefix + ".bwd", in, hidden, true, rng);
  }
}

template <typename Scalar>
void BiGru<Scalar>::collect(ParameterList<Scalar>& out) {
  for (size_t l = 0; l < forward_dirs_.size(); ++l) {
    forward_dirs_[l].collect(out);
    backward_dirs_[l].collect(out);
  }
}

template <typename Scalar>
Matrix<Scalar> BiGru<Scalar>::forward(const Matrix<Scalar>& x, Index batch, Index steps) {
  Matrix<Scalar> cur = x;
  for (size_t l = 0; l < forward_dirs_.size(); ++l) {
    Matrix<Scalar> next(cur.rows(), 2 * hidden_);
    next.leftCols(hidden_) = forward_dirs_[l].forward(cur, batch, steps);
    next.rightCols(hidden_) = backward_dirs_[l].forward(cur, batch, steps);
    cur = std::move(next);
  }
  return cur;
}

template <typename Scalar>
Matrix<Scalar> BiGru<Scalar>::backward(const Matrix<Scalar>& grad, bool param_grads) {
  Matrix<Scalar> g = grad;
  for (size_t i = forward_dirs_.size(); i-- > 0;) {
    Matrix<Scalar> gf = forward_dirs_[i].backward(g.leftCols(hidden_), param_grads);
    gf += backward_dirs_[i].backward(g.rightCols(hidden_), param_grads);
    g = std::move(gf);
  }
  return g;
}

template class GruDirection<float>;
template class GruDirection<double>;
template class BiGru<float>;
template class BiGru<double>;

}  // namespace v2s::nn
