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

#include "v2s/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "v2s/core/error.hpp"

namespace v2s::nn {

namespace {

constexpr Index kIm2colBudget = Index{1} << 22;  // elements per column buffer

std::string shape_str(Index n, Index h, Index w, Index c) {
  return std::to_string(n) + "x" + std::to_string(c) + "x" + std::to_string(h) + "x" +
         std::to_string(w);
}

}  // namespace

// ---------------------------------------------------------------- Conv2d

template <typename Scalar>
Conv2d<Scalar>::Conv2d(std::string name, const Conv2dOptions& options, Rng& rng) : opt_(options) {
  if (opt_.groups < 1 || opt_.in_channels % opt_.groups != 0 || opt_.out_channels % opt_.groups != 0) {
    throw ConfigError(name + ": channel counts must be divisible by groups");
  }
  const Index k = opt_.in_channels / opt_.groups * opt_.kernel_h * opt_.kernel_w;
  weight = Parameter<Scalar>(name + ".weight", k, opt_.out_channels);
  init_uniform_fan_in(weight.value, k, rng);
  if (opt_.bias) {
    bias = Parameter<Scalar>(name + ".bias", 1, opt_.out_channels);
    init_uniform_fan_in(bias.value, k, rng);
  }
}

template <typename Scalar>
void Conv2d<Scalar>::collect(ParameterList<Scalar>& out) {
  out.push_back(&weight);
  if (opt_.bias) out.push_back(&bias);
}

template <typename Scalar>
Index Conv2d<Scalar>::chunk_samples(Index ho, Index wo) const {
  const Index k = weight.value.rows();
  return std::max<Index>(1, kIm2colBudget / std::max<Index>(1, ho * wo * k));
}

template <typename Scalar>
void Conv2d<Scalar>::im2col(const FeatureMap<Scalar>& x, Index group, Index n0, Index n1,
                            Matrix<Scalar>& cols) const {
  const Index h = x.height, w = x.width;
  const Index ho = out_height(h), wo = out_width(w);
  const Index cin_g = opt_.in_channels / opt_.groups;
  const Index kh = opt_.kernel_h, kw = opt_.kernel_w;
  const Index sh = opt_.stride_h, sw = opt_.stride_w;
  const Index ph = opt_.pad_h, pw = opt_.pad_w;
  cols.resize((n1 - n0) * ho * wo, cin_g * kh * kw);
  for (Index n = n0; n < n1; ++n) {
    for (Index c = 0; c < cin_g; ++c) {
      const Scalar* plane = x.data.col(group * cin_g + c).data() + n * h * w;
      for (Index i = 0; i < kh; ++i) {
        for (Index j = 0; j < kw; ++j) {
          Scalar* dst = cols.col((c * kh + i) * kw + j).data() + (n - n0) * ho * wo;
          // Valid output columns for this tap: 0 <= ox*sw - pw + j < w.
          const Index ox_lo = std::min(wo, std::max<Index>(0, (pw - j + sw - 1) / sw));
          const Index last = w - 1 + pw - j;
          const Index ox_hi = last < 0 ? ox_lo : std::max(ox_lo, std::min(wo, last / sw + 1));
          for (Index oy = 0; oy < ho; ++oy) {
            Scalar* drow = dst + oy * wo;
            const Index iy = oy * sh - ph + i;
            if (iy < 0 || iy >= h) {
              std::fill(drow, drow + wo, Scalar(0));
              continue;
            }
            const Scalar* srow = plane + iy * w;
            std::fill(drow, drow + ox_lo, Scalar(0));
            if (sw == 1) {
              std::copy(srow + ox_lo - pw + j, srow + ox_hi - pw + j, drow + ox_lo);
            } else {
              for (Index ox = ox_lo; ox < ox_hi; ++ox) drow[ox] = srow[ox * sw - pw + j];
            }
            std::fill(drow + ox_hi, drow + wo, Scalar(0));
          }
        }
      }
    }
  }
}

template <typename Scalar>
void Conv2d<Scalar>::col2im(const Matrix<Scalar>& cols, Index group, Index n0, Index n1,
                            FeatureMap<Scalar>& gx) const {
  const Index h = gx.height, w = gx.width;
  const Index ho = out_height(h), wo = out_width(w);
  const Index cin_g = opt_.in_channels / opt_.groups;
  const Index kh = opt_.kernel_h, kw = opt_.kernel_w;
  const Index sh = opt_.stride_h, sw = opt_.stride_w;
  const Index ph = opt_.pad_h, pw = opt_.pad_w;
  for (Index n = n0; n < n1; ++n) {
    for (Index c = 0; c < cin_g; ++c) {
      Scalar* plane = gx.data.col(group * cin_g + c).data() + n * h * w;
      for (Index i = 0; i < kh; ++i) {
        for (Index j = 0; j < kw; ++j) {
          const Scalar* src = cols.col((c * kh + i) * kw + j).data() + (n - n0) * ho * wo;
          const Index ox_lo = std::min(wo, std::max<Index>(0, (pw - j + sw - 1) / sw));
          const Index last = w - 1 + pw - j;
          const Index ox_hi = last < 0 ? ox_lo : std::max(ox_lo, std::min(wo, last / sw + 1));
          for (Index oy = 0; oy < ho; ++oy) {
            const Index iy = oy * sh - ph + i;
            if (iy < 0 || iy >= h) continue;
            const Scalar* srow = src + oy * wo;
            Scalar* drow = plane + iy * w;
            for (Index ox = ox_lo; ox < ox_hi; ++ox) drow[ox * sw - pw + j] += srow[ox];
          }
        }
      }
    }
  }
}

template <typename Scalar>
FeatureMap<Scalar> Conv2d<Scalar>::apply(const FeatureMap<Scalar>& x, bool with_bias) {
  if (x.channels() != opt_.in_channels) {
    throw ShapeError(weight.name + ": expected " + std::to_string(opt_.in_channels) +
                     " input channels, got " + std::to_string(x.channels()));
  }
  const Index ho = out_height(x.height), wo = out_width(x.width);
  if (ho < 1 || wo < 1) {
    throw ShapeError(weight.name + ": input " + shape_str(x.batch, x.height, x.width, x.channels()) +
                     " is smaller than the kernel");
  }
  FeatureMap<Scalar> out(x.batch, ho, wo, opt_.out_channels);
  const Index cout_g = opt_.out_channels / opt_.groups;
  const bool pointwise = opt_.kernel_h == 1 && opt_.kernel_w == 1 && opt_.stride_h == 1 &&
                         opt_.stride_w == 1 && opt_.pad_h == 0 && opt_.pad_w == 0 && opt_.groups == 1;
  if (pointwise) {
    out.data.noalias() = x.data * weight.value;
  } else {
    const Index chunk = chunk_samples(ho, wo);
    Matrix<Scalar> cols;
    for (Index g = 0; g < opt_.groups; ++g) {
      const auto wg = weight.value.middleCols(g * cout_g, cout_g);
      for (Index n0 = 0; n0 < x.batch; n0 += chunk) {
        const Index n1 = std::min(x.batch, n0 + chunk);
        im2col(x, g, n0, n1, cols);
        out.data.block(n0 * ho * wo, g * cout_g, (n1 - n0) * ho * wo, cout_g).noalias() = cols * wg;
      }
    }
  }
  if (with_bias && opt_.bias) out.data.rowwise() += bias.value.row(0);
  return out;
}

template <typename Scalar>
FeatureMap<Scalar> Conv2d<Scalar>::forward(const FeatureMap<Scalar>& x) {
  input_ = x;
  tangent_ = false;
  return apply(x, true);
}

template <typename Scalar>
FeatureMap<Scalar> Conv2d<Scalar>::forward_tangent(const FeatureMap<Scalar>& v) {
  input_ = v;
  tangent_ = true;
  return apply(v, false);
}

template <typename Scalar>
FeatureMap<Scalar> Conv2d<Scalar>::backward(const FeatureMap<Scalar>& grad, bool param_grads) {
  const FeatureMap<Scalar>& x = input_;
  const Index ho = out_height(x.height), wo = out_width(x.width);
  if (grad.batch != x.batch || grad.height != ho || grad.width != wo ||
      grad.channels() != opt_.out_channels) {
    throw ShapeError(weight.name + ": gradient shape does not match the last forward output");
  }
  FeatureMap<Scalar> gx;
  if (opt_.input_grad) {
    gx = FeatureMap<Scalar>(x.batch, x.height, x.width, opt_.in_channels);
    gx.data.setZero();
  }
  const Index cout_g = opt_.out_channels / opt_.groups;
  const bool pointwise = opt_.kernel_h == 1 && opt_.kernel_w == 1 && opt_.stride_h == 1 &&
                         opt_.stride_w == 1 && opt_.pad_h == 0 && opt_.pad_w == 0 && opt_.groups == 1;
  if (pointwise) {
    if (param_grads) weight.grad.noalias() += x.data.transpose() * grad.data;
    if (opt_.input_grad) gx.data.noalias() = grad.data * weight.value.transpose();
  } else if (param_grads || opt_.input_grad) {
    const Index chunk = chunk_samples(ho, wo);
    Matrix<Scalar> cols;
    Matrix<Scalar> gcols;
    for (Index g = 0; g < opt_.groups; ++g) {
      const auto wg = weight.value.middleCols(g * cout_g, cout_g);
      for (Index n0 = 0; n0 < x.batch; n0 += chunk) {
        const Index n1 = std::min(x.batch, n0 + chunk);
        const auto gblock = grad.data.block(n0 * ho * wo, g * cout_g, (n1 - n0) * ho * wo, cout_g);
        if (param_grads) {
          im2col(x, g, n0, n1, cols);
          weight.grad.middleCols(g * cout_g, cout_g).noalias() += cols.transpose() * gblock;
        }
        if (opt_.input_grad) {
          gcols.noalias() = gblock * wg.transpose();
          col2im(gcols, g, n0, n1, gx);
        }
      }
    }
  }
  if (param_grads && opt_.bias && !tangent_) bias.grad.row(0) += grad.data.colwise().sum();
  return gx;
}

// ------------------------------------------------------- ConvTranspose1d

template <typename Scalar>
ConvTranspose1d<Scalar>::ConvTranspose1d(std::string name, Index in_channels, Index out_channels,
                                         Index kernel, Index stride, Index pad, bool bias, Rng& rng)
    : in_(in_channels),
      out_(out_channels),
      kernel_(kernel),
      stride_(stride),
      pad_(pad),
      has_bias_(bias) {
  weight = Parameter<Scalar>(name + ".weight", in_, out_ * kernel_);
  init_uniform_fan_in(weight.value, out_ * kernel_, rng);
  if (has_bias_) {
    this->bias = Parameter<Scalar>(name + ".bias", 1, out_);
    init_uniform_fan_in(this->bias.value, out_ * kernel_, rng);
  }
}

template <typename Scalar>
void ConvTranspose1d<Scalar>::collect(ParameterList<Scalar>& out) {
  out.push_back(&weight);
  if (has_bias_) out.push_back(&bias);
}

template <typename Scalar>
FeatureMap<Scalar> ConvTranspose1d<Scalar>::forward(const FeatureMap<Scalar>& x) {
  if (x.height != 1 || x.channels() != in_) {
    throw ShapeError(weight.name + ": expected a 1-D map with " + std::to_string(in_) + " channels");
  }
  input_ = x;
  const Index lin = x.width;
  const Index lout = out_length(lin);
  const Matrix<Scalar> cols = x.data * weight.value;
  FeatureMap<Scalar> y(x.batch, 1, lout, out_);
  y.data.setZero();
  for (Index co = 0; co < out_; ++co) {
    Scalar* dst = y.data.col(co).data();
    for (Index k = 0; k < kernel_; ++k) {
      const Scalar* src = cols.col(co * kernel_ + k).data();
      for (Index n = 0; n < x.batch; ++n) {
        for (Index i = 0; i < lin; ++i) {
          const Index pos = i * stride_ - pad_ + k;
          if (pos >= 0 && pos < lout) dst[n * lout + pos] += src[n * lin + i];
        }
      }
    }
  }
  if (has_bias_) y.data.rowwise() += bias.value.row(0);
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> ConvTranspose1d<Scalar>::backward(const FeatureMap<Scalar>& grad, bool param_grads) {
  const Index lin = input_.width;
  const Index lout = out_length(lin);
  if (grad.width != lout || grad.batch != input_.batch || grad.channels() != out_) {
    throw ShapeError(weight.name + ": gradient shape does not match the last forward output");
  }
  Matrix<Scalar> gcols(input_.batch * lin, out_ * kernel_);
  for (Index co = 0; co < out_; ++co) {
    const Scalar* src = grad.data.col(co).data();
    for (Index k = 0; k < kernel_; ++k) {
      Scalar* dst = gcols.col(co * kernel_ + k).data();
      for (Index n = 0; n < input_.batch; ++n) {
        for (Index i = 0; i < lin; ++i) {
          const Index pos = i * stride_ - pad_ + k;
          dst[n * lin + i] = (pos >= 0 && pos < lout) ? src[n * lout + pos] : Scalar(0);
        }
      }
    }
  }
  if (param_grads) {
    weight.grad.noalias() += input_.data.transpose() * gcols;
    if (has_bias_) bias.grad.row(0) += grad.data.colwise().sum();
  }
  FeatureMap<Scalar> gx(input_.batch, 1, lin, in_);
  gx.data.noalias() = gcols * weight.value.transpose();
  return gx;
}

// ------------------------------------------------------------- BatchNorm

template <typename Scalar>
BatchNorm<Scalar>::BatchNorm(std::string name, Index channels, double momentum, double eps)
    : gamma(name + ".gamma", 1, channels),
      beta(name + ".beta", 1, channels),
      running_mean(name + ".running_mean", 1, channels, false),
      running_var(name + ".running_var", 1, channels, false),
      momentum_(momentum),
      eps_(eps) {
  gamma.value.setOnes();
  running_var.value.setOnes();
}

template <typename Scalar>
void BatchNorm<Scalar>::collect(ParameterList<Scalar>& out) {
  out.push_back(&gamma);
  out.push_back(&beta);
  out.push_back(&running_mean);
  out.push_back(&running_var);
}

template <typename Scalar>
FeatureMap<Scalar> BatchNorm<Scalar>::forward(const FeatureMap<Scalar>& x, Mode mode) {
  const Index rows = x.data.rows();
  RowVector<Scalar> mean;
  RowVector<Scalar> var;
  batch_stats_ = mode != Mode::kEval;
  if (batch_stats_) {
    if (rows < 2) throw ShapeError(gamma.name + ": batch statistics need at least 2 rows");
    mean = x.data.colwise().mean();
    var = (x.data.rowwise() - mean).array().square().colwise().mean().matrix();
    if (mode == Mode::kTrain) {
      const Scalar m = static_cast<Scalar>(momentum_);
      const Scalar unbias = static_cast<Scalar>(static_cast<double>(rows) / (rows - 1));
      running_mean.value.row(0) = (Scalar(1) - m) * running_mean.value.row(0) + m * mean;
      running_var.value.row(0) = (Scalar(1) - m) * running_var.value.row(0) + m * unbias * var;
    }
  } else {
    mean = running_mean.value.row(0);
    var = running_var.value.row(0);
  }
  inv_std_ = (var.array() + static_cast<Scalar>(eps_)).rsqrt().matrix();
  normalized_ = ((x.data.rowwise() - mean).array().rowwise() * inv_std_.array()).matrix();
  FeatureMap<Scalar> y(x.batch, x.height, x.width, x.channels());
  y.data = ((normalized_.array().rowwise() * gamma.value.row(0).array()).rowwise() +
            beta.value.row(0).array())
               .matrix();
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> BatchNorm<Scalar>::backward(const FeatureMap<Scalar>& grad, bool param_grads) {
  const Index rows = grad.data.rows();
  const RowVector<Scalar> gsum = grad.data.colwise().sum();
  const RowVector<Scalar> gxhat = (grad.data.array() * normalized_.array()).colwise().sum().matrix();
  if (param_grads) {
    beta.grad.row(0) += gsum;
    gamma.grad.row(0) += gxhat;
  }
  FeatureMap<Scalar> gx(grad.batch, grad.height, grad.width, grad.channels());
  const RowVector<Scalar> scale = (gamma.value.row(0).array() * inv_std_.array()).matrix();
  if (batch_stats_) {
    const Scalar inv_n = Scalar(1) / static_cast<Scalar>(rows);
    gx.data = (((grad.data.array() * static_cast<Scalar>(rows)).rowwise() - gsum.array() -
                normalized_.array().rowwise() * gxhat.array())
                   .rowwise() *
               (scale.array() * inv_n))
                  .matrix();
  } else {
    gx.data = (grad.data.array().rowwise() * scale.array()).matrix();
  }
  return gx;
}

// ----------------------------------------------------------- activations

template <typename Scalar>
FeatureMap<Scalar> Relu<Scalar>::forward(const FeatureMap<Scalar>& x) {
  active_ = x.data.array() > Scalar(0);
  FeatureMap<Scalar> y = x;
  y.data = x.data.cwiseMax(Scalar(0));
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> Relu<Scalar>::forward_tangent(const FeatureMap<Scalar>& v) const {
  FeatureMap<Scalar> y = v;
  y.data = active_.select(v.data.array(), Scalar(0)).matrix();
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> Relu<Scalar>::backward(const FeatureMap<Scalar>& grad) const {
  return forward_tangent(grad);
}

template <typename Scalar>
FeatureMap<Scalar> LeakyRelu<Scalar>::forward(const FeatureMap<Scalar>& x) {
  positive_ = x.data.array() > Scalar(0);
  FeatureMap<Scalar> y = x;
  y.data = positive_.select(x.data.array(), x.data.array() * slope_).matrix();
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> LeakyRelu<Scalar>::forward_tangent(const FeatureMap<Scalar>& v) const {
  FeatureMap<Scalar> y = v;
  y.data = positive_.select(v.data.array(), v.data.array() * slope_).matrix();
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> LeakyRelu<Scalar>::backward(const FeatureMap<Scalar>& grad) const {
  return forward_tangent(grad);
}

template <typename Scalar>
FeatureMap<Scalar> Tanh<Scalar>::forward(const FeatureMap<Scalar>& x) {
  FeatureMap<Scalar> y = x;
  y.data = x.data.array().tanh().matrix();
  output_ = y.data;
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> Tanh<Scalar>::backward(const FeatureMap<Scalar>& grad) const {
  FeatureMap<Scalar> g = grad;
  g.data = (grad.data.array() * (Scalar(1) - output_.array().square())).matrix();
  return g;
}

// --------------------------------------------------------------- pooling

template <typename Scalar>
FeatureMap<Scalar> MaxPool2d<Scalar>::forward(const FeatureMap<Scalar>& x) {
  in_h_ = x.height;
  in_w_ = x.width;
  const Index ho = out_size(x.height), wo = out_size(x.width);
  FeatureMap<Scalar> y(x.batch, ho, wo, x.channels());
  argmax_.resize(y.data.rows(), y.data.cols());
  for (Index c = 0; c < x.channels(); ++c) {
    const Scalar* in = x.data.col(c).data();
    for (Index n = 0; n < x.batch; ++n) {
      for (Index oy = 0; oy < ho; ++oy) {
        for (Index ox = 0; ox < wo; ++ox) {
          Scalar best = -std::numeric_limits<Scalar>::infinity();
          Index best_idx = -1;
          for (Index i = 0; i < kernel_; ++i) {
            const Index iy = oy * stride_ - pad_ + i;
            if (iy < 0 || iy >= x.height) continue;
            for (Index j = 0; j < kernel_; ++j) {
              const Index ix = ox * stride_ - pad_ + j;
              if (ix < 0 || ix >= x.width) continue;
              const Index idx = (n * x.height + iy) * x.width + ix;
              if (best_idx < 0 || in[idx] > best) {
                best = in[idx];
                best_idx = idx;
              }
            }
          }
          const Index r = (n * ho + oy) * wo + ox;
          y.data(r, c) = best;
          argmax_(r, c) = best_idx;
        }
      }
    }
  }
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> MaxPool2d<Scalar>::forward_tangent(const FeatureMap<Scalar>& v) const {
  FeatureMap<Scalar> y(v.batch, out_size(in_h_), out_size(in_w_), v.channels());
  for (Index c = 0; c < y.channels(); ++c)
    for (Index r = 0; r < y.data.rows(); ++r) y.data(r, c) = v.data(argmax_(r, c), c);
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> MaxPool2d<Scalar>::backward(const FeatureMap<Scalar>& grad) const {
  FeatureMap<Scalar> gx(grad.batch, in_h_, in_w_, grad.channels());
  gx.data.setZero();
  for (Index c = 0; c < grad.channels(); ++c)
    for (Index r = 0; r < grad.data.rows(); ++r) gx.data(argmax_(r, c), c) += grad.data(r, c);
  return gx;
}

template <typename Scalar>
FeatureMap<Scalar> GlobalAvgPool<Scalar>::forward(const FeatureMap<Scalar>& x) {
  h_ = x.height;
  w_ = x.width;
  const Index plane = x.plane();
  FeatureMap<Scalar> y(x.batch, 1, 1, x.channels());
  for (Index c = 0; c < x.channels(); ++c) {
    Eigen::Map<const Matrix<Scalar>> m(x.data.col(c).data(), plane, x.batch);
    y.data.col(c) = m.colwise().mean().transpose();
  }
  return y;
}

template <typename Scalar>
FeatureMap<Scalar> GlobalAvgPool<Scalar>::backward(const FeatureMap<Scalar>& grad) const {
  const Index plane = h_ * w_;
  FeatureMap<Scalar> gx(grad.batch, h_, w_, grad.channels());
  const Scalar inv = Scalar(1) / static_cast<Scalar>(plane);
  for (Index c = 0; c < grad.channels(); ++c) {
    Eigen::Map<Matrix<Scalar>> m(gx.data.col(c).data(), plane, grad.batch);
    m.rowwise() = grad.data.col(c).transpose() * inv;
  }
  return gx;
}

// ---------------------------------------------------------------- Linear

template <typename Scalar>
Linear<Scalar>::Linear(std::string name, Index in, Index out, bool bias, Rng& rng) : has_bias_(bias) {
  weight = Parameter<Scalar>(name + ".weight", in, out);
  init_uniform_fan_in(weight.value, in, rng);
  if (has_bias_) {
    this->bias = Parameter<Scalar>(name + ".bias", 1, out);
    init_uniform_fan_in(this->bias.value, in, rng);
  }
}

template <typename Scalar>
void Linear<Scalar>::collect(ParameterList<Scalar>& out) {
  out.push_back(&weight);
  if (has_bias_) out.push_back(&bias);
}

template <typename Scalar>
Matrix<Scalar> Linear<Scalar>::forward(const Matrix<Scalar>& x) {
  if (x.cols() != weight.value.rows()) throw ShapeError(weight.name + ": input width mismatch");
  input_ = x;
  tangent_ = false;
  Matrix<Scalar> y = x * weight.value;
  if (has_bias_) y.rowwise() += bias.value.row(0);
  return y;
}

template <typename Scalar>
Matrix<Scalar> Linear<Scalar>::forward_tangent(const Matrix<Scalar>& v) {
  input_ = v;
  tangent_ = true;
  return v * weight.value;
}

template <typename Scalar>
Matrix<Scalar> Linear<Scalar>::backward(const Matrix<Scalar>& grad, bool param_grads) {
  if (param_grads) {
    weight.grad.noalias() += input_.transpose() * grad;
    if (has_bias_ && !tangent_) bias.grad.row(0) += grad.colwise().sum();
  }
  return grad * weight.value.transpose();
}

#define V2S_INSTANTIATE(T)          \
  template class Conv2d<T>;         \
  template class ConvTranspose1d<T>; \
  template class BatchNorm<T>;      \
  template class Relu<T>;           \
  template class LeakyRelu<T>;      \
  template class Tanh<T>;           \
  template class MaxPool2d<T>;      \
  template class GlobalAvgPool<T>;  \
  template class Linear<T>;

V2S_INSTANTIATE(float)
V2S_INSTANTIATE(double)

#undef V2S_INSTANTIATE

}  // namespace v2s::nn
