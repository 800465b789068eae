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

#include "v2s/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "v2s/core/error.hpp"

namespace v2s {

VideoClip::VideoClip(std::vector<Frame> frames, int frame_rate)
    : frames_(std::move(frames)), frame_rate_(frame_rate) {
  if (frames_.empty()) throw ShapeError("VideoClip needs at least one frame");
  if (frame_rate_ <= 0) throw ConfigError("VideoClip frame_rate must be > 0");
  const auto h = frames_.front().rows();
  const auto w = frames_.front().cols();
  if (h == 0 || w == 0) throw ShapeError("VideoClip frames must be non-empty");
  for (size_t t = 0; t < frames_.size(); ++t) {
    const Frame& f = frames_[t];
    if (f.rows() != h || f.cols() != w) {
      throw ShapeError("VideoClip frame " + std::to_string(t) + " is " +
                       std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                       ", expected " + std::to_string(h) + "x" + std::to_string(w));
    }
    // NaN fails both comparisons and is rejected too.
    if (!(f.minCoeff() >= 0.0f && f.maxCoeff() <= 1.0f)) {
      throw RangeError("VideoClip frame " + std::to_string(t) +
                       " has intensities outside [0,1]");
    }
  }
}

Waveform::Waveform(Eigen::VectorXd samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) throw ConfigError("Waveform sample_rate must be > 0");
  for (Eigen::Index i = 0; i < samples_.size(); ++i) {
    const double s = samples_[i];
    if (!(s >= -1.0 && s <= 1.0)) {
      throw RangeError("Waveform sample " + std::to_string(i) + " = " + std::to_string(s) +
                       " is outside [-1,1]");
    }
  }
}

Waveform::Waveform(Eigen::VectorXd samples, int sample_rate, Unchecked)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {}

Waveform Waveform::clamped(Eigen::VectorXd samples, int sample_rate) {
  if (sample_rate <= 0) throw ConfigError("Waveform sample_rate must be > 0");
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    double& s = samples[i];
    if (!std::isfinite(s)) throw RangeError("Waveform sample " + std::to_string(i) + " is not finite");
    s = std::clamp(s, -1.0, 1.0);
  }
  return Waveform(std::move(samples), sample_rate, Unchecked{});
}

NormalizedSpectrogram::NormalizedSpectrogram(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.size() == 0) throw ShapeError("NormalizedSpectrogram is empty");
  if (!(values_.minCoeff() >= -1.0 && values_.maxCoeff() <= 1.0)) {
    throw RangeError("NormalizedSpectrogram values must lie in [-1,1]");
  }
}

int samples_per_frame(int sample_rate, int frame_rate) {
  if (sample_rate <= 0 || frame_rate <= 0 || sample_rate % frame_rate != 0) {
    throw ConfigError("sample_rate " + std::to_string(sample_rate) +
                      " is not an integer multiple of frame_rate " + std::to_string(frame_rate));
  }
  return sample_rate / frame_rate;
}

}  // namespace v2s
