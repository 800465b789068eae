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

#include "v2s/model/critics.hpp"

#include <sstream>

#include "v2s/core/error.hpp"

namespace v2s::model {

namespace {

struct WaveLayerSpec {
  Index out;     // nominal width; 1 means the score channel and is never scaled
  Index kernel;
  Index stride;
  bool grouped;
};

constexpr WaveLayerSpec kWaveLayers[] = {
    {16, 15, 1, false},  {64, 41, 4, true},    {256, 41, 4, true},  {1024, 41, 4, true},
    {1024, 41, 4, true}, {1024, 5, 1, false}, {1, 3, 1, false},
};

// Largest group count not above in/4 that divides both widths.
Index group_count(Index in, Index out) {
  for (Index g = std::max<Index>(1, in / 4); g > 1; --g) {
    if (in % g == 0 && out % g == 0) return g;
  }
  return 1;
}

std::string size_message(const char* what, Index expected, Index got) {
  std::ostringstream os;
  os << what << " expects " << expected << " values per input, got " << got;
  return os.str();
}

}  // namespace

template <typename Scalar>
WaveCritic<Scalar>::WaveCritic(const WaveCriticConfig& config, Rng& rng) : config_(config) {
  if (!(config.width_scale > 0.0 && config.width_scale <= 1.0)) {
    throw ConfigError("wave critic width_scale must be in (0, 1]");
  }
  Index in = 1;
  Index length = config.input_length;
  int index = 0;
  for (const WaveLayerSpec& spec : kWaveLayers) {
    nn::Conv2dOptions o;
    o.in_channels = in;
    o.out_channels = spec.out == 1 ? 1 : scaled_width(spec.out, config.width_scale);
    o.kernel_w = spec.kernel;
    o.stride_w = spec.stride;
    o.pad_w = spec.kernel / 2;
    o.groups = spec.grouped ? group_count(in, o.out_channels) : 1;
    convs_.emplace_back("wave_critic.conv" + std::to_string(index++), o, rng);
    length = convs_.back().out_width(length);
    in = o.out_channels;
  }
  if (length < 1) throw ConfigError("wave critic input_length is too short");
  acts_.resize(convs_.size() - 1, nn::LeakyRelu<Scalar>(0.2));
}

template <typename Scalar>
ParameterList<Scalar> WaveCritic<Scalar>::parameters() {
  ParameterList<Scalar> out;
  for (auto& c : convs_) c.collect(out);
  return out;
}

template <typename Scalar>
FeatureMap<Scalar> WaveCritic<Scalar>::as_map(const nn::Matrix<Scalar>& x) const {
  if (x.rows() != config_.input_length) {
    throw ShapeError(size_message("wave critic", config_.input_length, x.rows()));
  }
  if (x.cols() < 1) throw ShapeError("wave critic needs a nonempty batch");
  FeatureMap<Scalar> m(x.cols(), 1, x.rows(), 1);
  m.data = x.reshaped();
  return m;
}

template <typename Scalar>
nn::Vector<Scalar> WaveCritic<Scalar>::head(const FeatureMap<Scalar>& y) {
  out_len_ = y.width;
  return Eigen::Map<const nn::Matrix<Scalar>>(y.data.data(), y.width, y.batch).colwise().mean().transpose();
}

template <typename Scalar>
nn::Vector<Scalar> WaveCritic<Scalar>::forward(const nn::Matrix<Scalar>& x) {
  FeatureMap<Scalar> h = as_map(x);
  batch_ = x.cols();
  for (size_t i = 0; i < convs_.size(); ++i) {
    h = convs_[i].forward(h);
    if (i < acts_.size()) h = acts_[i].forward(h);
  }
  return head(h);
}

template <typename Scalar>
nn::Vector<Scalar> WaveCritic<Scalar>::forward_tangent(const nn::Matrix<Scalar>& v) {
  FeatureMap<Scalar> h = as_map(v);
  if (v.cols() != batch_) throw ShapeError("wave critic tangent batch differs from the last forward");
  for (size_t i = 0; i < convs_.size(); ++i) {
    h = convs_[i].forward_tangent(h);
    if (i < acts_.size()) h = acts_[i].forward_tangent(h);
  }
  return head(h);
}

template <typename Scalar>
nn::Matrix<Scalar> WaveCritic<Scalar>::backward(const nn::Vector<Scalar>& weights, bool param_grads) {
  if (weights.size() != batch_) throw ShapeError("wave critic: one weight per batch element required");
  FeatureMap<Scalar> g(batch_, 1, out_len_, 1);
  Eigen::Map<nn::Matrix<Scalar>>(g.data.data(), out_len_, batch_).rowwise() =
      weights.transpose() / static_cast<Scalar>(out_len_);
  for (size_t i = convs_.size(); i-- > 0;) {
    if (i < acts_.size()) g = acts_[i].backward(g);
    g = convs_[i].backward(g, param_grads);
  }
  return g.data.reshaped(config_.input_length, batch_);
}

namespace {

nn::Conv2dOptions power_frontend(Index width) {
  nn::Conv2dOptions o;
  o.in_channels = 1;
  o.out_channels = width;
  o.kernel_h = o.kernel_w = 7;
  o.stride_h = o.stride_w = 2;
  o.pad_h = o.pad_w = 3;
  o.bias = true;
  return o;
}

}  // namespace

template <typename Scalar>
PowerCritic<Scalar>::PowerCritic(const PowerCriticConfig& config, Rng& rng)
    : config_(config),
      frontend_("power_critic.frontend", power_frontend(scaled_width(64, config.width_scale)), rng),
      trunk_("power_critic.resnet", scaled_width(64, config.width_scale),
             scaled_width(64, config.width_scale), false, rng),
      head_("power_critic.head", trunk_.output_dim(), 1, true, rng) {
  if (!(config.width_scale > 0.0 && config.width_scale <= 1.0)) {
    throw ConfigError("power critic width_scale must be in (0, 1]");
  }
  if (config.num_bins < 8 || config.num_frames < 8) throw ConfigError("power critic input is too small");
}

template <typename Scalar>
ParameterList<Scalar> PowerCritic<Scalar>::parameters() {
  ParameterList<Scalar> out;
  frontend_.collect(out);
  trunk_.collect(out);
  head_.collect(out);
  return out;
}

template <typename Scalar>
FeatureMap<Scalar> PowerCritic<Scalar>::as_map(const nn::Matrix<Scalar>& x) const {
  if (x.rows() != input_size()) throw ShapeError(size_message("power critic", input_size(), x.rows()));
  if (x.cols() < 1) throw ShapeError("power critic needs a nonempty batch");
  FeatureMap<Scalar> m(x.cols(), config_.num_frames, config_.num_bins, 1);
  m.data = x.reshaped();
  return m;
}

template <typename Scalar>
nn::Vector<Scalar> PowerCritic<Scalar>::forward(const nn::Matrix<Scalar>& x) {
  FeatureMap<Scalar> h = frontend_.forward(as_map(x));
  batch_ = x.cols();
  h = frontend_pool_.forward(frontend_relu_.forward(h));
  h = trunk_.forward(h, Mode::kTrain);
  return head_.forward(h.data).col(0);
}

template <typename Scalar>
nn::Vector<Scalar> PowerCritic<Scalar>::forward_tangent(const nn::Matrix<Scalar>& v) {
  if (v.cols() != batch_) throw ShapeError("power critic tangent batch differs from the last forward");
  FeatureMap<Scalar> h = frontend_.forward_tangent(as_map(v));
  h = frontend_pool_.forward_tangent(frontend_relu_.forward_tangent(h));
  h = trunk_.forward_tangent(h);
  return head_.forward_tangent(h.data).col(0);
}

template <typename Scalar>
nn::Matrix<Scalar> PowerCritic<Scalar>::backward(const nn::Vector<Scalar>& weights, bool param_grads) {
  if (weights.size() != batch_) throw ShapeError("power critic: one weight per batch element required");
  FeatureMap<Scalar> g(batch_, 1, 1, trunk_.output_dim());
  g.data = head_.backward(nn::Matrix<Scalar>(weights), param_grads);
  g = trunk_.backward(g, param_grads);
  g = frontend_relu_.backward(frontend_pool_.backward(g));
  g = frontend_.backward(g, param_grads);
  return g.data.reshaped(input_size(), batch_);
}

template <typename Scalar>
double critic_wave(WaveCritic<Scalar>& net, const Waveform& clip) {
  return static_cast<double>(net.forward(clip.samples().cast<Scalar>())(0));
}

template <typename Scalar>
double critic_power(PowerCritic<Scalar>& net, const NormalizedSpectrogram& spec) {
  const PowerCriticConfig& c = net.config();
  if (spec.num_bins() != c.num_bins || spec.num_frames() != c.num_frames) {
    std::ostringstream os;
    os << "power critic expects a " << c.num_bins << "x" << c.num_frames << " spectrogram, got "
       << spec.num_bins() << "x" << spec.num_frames();
    throw ShapeError(os.str());
  }
  const nn::Matrix<Scalar> x = spec.values().reshaped().template cast<Scalar>();
  return static_cast<double>(net.forward(x)(0));
}

template class WaveCritic<float>;
template class WaveCritic<double>;
template class PowerCritic<float>;
template class PowerCritic<double>;
template double critic_wave(WaveCritic<float>&, const Waveform&);
template double critic_wave(WaveCritic<double>&, const Waveform&);
template double critic_power(PowerCritic<float>&, const NormalizedSpectrogram&);
template double critic_power(PowerCritic<double>&, const NormalizedSpectrogram&);

}  // namespace v2s::model
