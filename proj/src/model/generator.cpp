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

#include "v2s/model/generator.hpp"

#include <algorithm>
#include <sstream>

#include "v2s/core/error.hpp"
#include "v2s/dsp/overlap_add.hpp"

namespace v2s::model {

void GeneratorConfig::validate() const {
  if (!(width_scale > 0.0 && width_scale <= 1.0)) throw ConfigError("width_scale must be in (0, 1]");
  if (frame_height < 16 || frame_width < 16) throw ConfigError("frames must be at least 16x16");
  int product = 1;
  for (int s : kDecoderStrides) product *= s;
  if (2 * samples_per_frame != product) {
    std::ostringstream os;
    os << "decoder produces " << product << "-sample segments but samples_per_frame is "
       << samples_per_frame << " (needs " << product / 2 << ")";
    throw ConfigError(os.str());
  }
}

namespace {

nn::Conv2dOptions frontend_options(Index channels) {
  nn::Conv2dOptions o;
  o.in_channels = kTemporalReceptiveField;
  o.out_channels = channels;
  o.kernel_h = o.kernel_w = 7;
  o.stride_h = o.stride_w = 2;
  o.pad_h = o.pad_w = 3;
  o.bias = false;
  o.input_grad = false;
  return o;
}

const GeneratorConfig& checked(const GeneratorConfig& c) {
  c.validate();
  return c;
}

}  // namespace

template <typename Scalar>
Generator<Scalar>::Generator(const GeneratorConfig& config, Rng& rng)
    : config_(checked(config)),
      frontend_("generator.frontend", frontend_options(config.frontend_channels()), rng),
      frontend_norm_("generator.frontend_bn", config.frontend_channels()),
      trunk_("generator.resnet", config.frontend_channels(), config.frontend_channels(), true, rng),
      gru_("generator.gru", trunk_.output_dim(), config.gru_hidden(), 2, rng) {
  Index in = config_.feature_dim();
  constexpr int kLayers = static_cast<int>(std::size(kDecoderStrides));
  for (int i = 0; i < kLayers; ++i) {
    const bool last = i + 1 == kLayers;
    const Index stride = kDecoderStrides[i];
    const Index kernel = i == 0 ? stride : 2 * stride;
    const Index pad = i == 0 ? 0 : stride / 2;
    const Index out = last ? 1 : std::max<Index>(8, in / 2);
    const std::string name = "generator.decoder" + std::to_string(i);
    DecoderLayer layer{nn::ConvTranspose1d<Scalar>(name, in, out, kernel, stride, pad, last, rng),
                       std::nullopt, {}};
    if (!last) layer.norm.emplace(name + ".bn", out);
    decoder_.push_back(std::move(layer));
    in = out;
  }
}

template <typename Scalar>
ParameterList<Scalar> Generator<Scalar>::parameters() {
  ParameterList<Scalar> out;
  frontend_.collect(out);
  frontend_norm_.collect(out);
  trunk_.collect(out);
  gru_.collect(out);
  for (auto& layer : decoder_) {
    layer.conv.collect(out);
    if (layer.norm) layer.norm->collect(out);
  }
  return out;
}

template <typename Scalar>
FeatureMap<Scalar> Generator<Scalar>::stack_frames(const std::vector<const VideoClip*>& clips) const {
  if (clips.empty()) throw ShapeError("generator needs at least one clip");
  const int h = config_.frame_height, w = config_.frame_width;
  const int steps = clips.front()->num_frames();
  for (const VideoClip* clip : clips) {
    if (clip->height() != h || clip->width() != w) {
      std::ostringstream os;
      os << "expected " << h << "x" << w << " frames, got " << clip->height() << "x" << clip->width();
      throw ShapeError(os.str());
    }
    if (clip->num_frames() != steps) throw ShapeError("clips in one batch must have equal length");
  }
  const Index plane = static_cast<Index>(h) * w;
  FeatureMap<Scalar> x(static_cast<Index>(clips.size()) * steps, h, w, kTemporalReceptiveField);
  constexpr int kHalf = kTemporalReceptiveField / 2;
  for (size_t b = 0; b < clips.size(); ++b) {
    for (int t = 0; t < steps; ++t) {
      const Index row0 = (static_cast<Index>(b) * steps + t) * plane;
      for (int j = 0; j < kTemporalReceptiveField; ++j) {
        const int src = std::clamp(t - kHalf + j, 0, steps - 1);
        const Frame& f = clips[b]->frame(src);
        x.data.col(j).segment(row0, plane) =
            Eigen::Map<const Eigen::VectorXf>(f.data(), plane).template cast<Scalar>();
      }
    }
  }
  return x;
}

template <typename Scalar>
nn::Matrix<Scalar> Generator<Scalar>::encode_frames(const std::vector<const VideoClip*>& clips,
                                                    Mode mode) {
  FeatureMap<Scalar> h = frontend_.forward(stack_frames(clips));
  h = frontend_norm_.forward(h, mode);
  h = frontend_relu_.forward(h);
  h = frontend_pool_.forward(h);
  return trunk_.forward(h, mode).data;
}

template <typename Scalar>
nn::Matrix<Scalar> Generator<Scalar>::temporal(const nn::Matrix<Scalar>& frame_features, Index batch,
                                               Index steps) {
  return gru_.forward(frame_features, batch, steps);
}

template <typename Scalar>
nn::Matrix<Scalar> Generator<Scalar>::decode(const nn::Matrix<Scalar>& features, Index batch,
                                             Index steps, Mode mode) {
  if (features.rows() != batch * steps || features.cols() != config_.feature_dim()) {
    std::ostringstream os;
    os << "decoder expects " << batch * steps << "x" << config_.feature_dim() << " features, got "
       << features.rows() << "x" << features.cols();
    throw ShapeError(os.str());
  }
  FeatureMap<Scalar> h(batch * steps, 1, 1, features.cols());
  h.data = features;
  for (auto& layer : decoder_) {
    h = layer.conv.forward(h);
    if (layer.norm) {
      h = layer.norm->forward(h, mode);
      h = layer.relu.forward(h);
    }
  }
  h = output_tanh_.forward(h);
  const Index seg = 2 * config_.samples_per_frame;
  nn::Matrix<Scalar> out(steps * config_.samples_per_frame, batch);
  for (Index b = 0; b < batch; ++b) {
    const Eigen::Map<const nn::Matrix<Scalar>> segments(h.data.data() + b * steps * seg, seg, steps);
    out.col(b) = dsp::overlap_add(segments);
  }
  batch_ = batch;
  steps_ = steps;
  return out;
}

template <typename Scalar>
nn::Matrix<Scalar> Generator<Scalar>::forward(const std::vector<const VideoClip*>& clips, Mode mode) {
  const Index batch = static_cast<Index>(clips.size());
  const Index steps = clips.empty() ? 0 : clips.front()->num_frames();
  const nn::Matrix<Scalar> frames = encode_frames(clips, mode);
  return decode(temporal(frames, batch, steps), batch, steps, mode);
}

template <typename Scalar>
void Generator<Scalar>::backward(const nn::Matrix<Scalar>& grad_waveforms) {
  const Index n = config_.samples_per_frame;
  if (grad_waveforms.rows() != steps_ * n || grad_waveforms.cols() != batch_) {
    throw ShapeError("generator gradient shape does not match the last forward output");
  }
  const Index seg = 2 * n;
  FeatureMap<Scalar> g(batch_ * steps_, 1, seg, 1);
  for (Index b = 0; b < batch_; ++b) {
    Eigen::Map<nn::Matrix<Scalar>>(g.data.data() + b * steps_ * seg, seg, steps_) =
        dsp::overlap_add_backward(grad_waveforms.col(b), n);
  }
  g = output_tanh_.backward(g);
  for (size_t i = decoder_.size(); i-- > 0;) {
    auto& layer = decoder_[i];
    if (layer.norm) {
      g = layer.relu.backward(g);
      g = layer.norm->backward(g);
    }
    g = layer.conv.backward(g);
  }
  FeatureMap<Scalar> gf(batch_ * steps_, 1, 1, trunk_.output_dim());
  gf.data = gru_.backward(g.data);
  g = trunk_.backward(gf, true);
  g = frontend_pool_.backward(g);
  g = frontend_relu_.backward(g);
  g = frontend_norm_.backward(g);
  frontend_.backward(g);
}

template <typename Scalar>
FeatureSequence encode(Generator<Scalar>& net, const VideoClip& clip) {
  const Index steps = clip.num_frames();
  const nn::Matrix<Scalar> frames = net.encode_frames({&clip}, Mode::kEval);
  return FeatureSequence{net.temporal(frames, 1, steps).template cast<double>()};
}

template <typename Scalar>
FeatureSequence encode_frames(Generator<Scalar>& net, const VideoClip& clip) {
  return FeatureSequence{net.encode_frames({&clip}, Mode::kEval).template cast<double>()};
}

template <typename Scalar>
Waveform decode(Generator<Scalar>& net, const FeatureSequence& features, int sample_rate) {
  const nn::Matrix<Scalar> out =
      net.decode(features.features.cast<Scalar>(), 1, features.num_frames(), Mode::kEval);
  return Waveform(out.col(0).template cast<double>(), sample_rate);
}

template <typename Scalar>
Waveform generate(Generator<Scalar>& net, const VideoClip& clip, int sample_rate) {
  const nn::Matrix<Scalar> out = net.forward({&clip}, Mode::kEval);
  return Waveform(out.col(0).template cast<double>(), sample_rate);
}

template class Generator<float>;
template class Generator<double>;
template FeatureSequence encode(Generator<float>&, const VideoClip&);
template FeatureSequence encode(Generator<double>&, const VideoClip&);
template FeatureSequence encode_frames(Generator<float>&, const VideoClip&);
template FeatureSequence encode_frames(Generator<double>&, const VideoClip&);
template Waveform decode(Generator<float>&, const FeatureSequence&, int);
template Waveform decode(Generator<double>&, const FeatureSequence&, int);
template Waveform generate(Generator<float>&, const VideoClip&, int);
template Waveform generate(Generator<double>&, const VideoClip&, int);

}  // namespace v2s::model
