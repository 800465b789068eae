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

#include "v2s/data/augment.hpp"

#include <algorithm>
#include <cmath>

#include "v2s/core/error.hpp"

namespace v2s::data {

namespace {

int crop_extent(int size) { return std::max(1, static_cast<int>(std::lround(kCropFraction * size))); }

}  // namespace

CropWindow random_window(int height, int width, Rng& rng) {
  CropWindow w;
  w.height = crop_extent(height);
  w.width = crop_extent(width);
  w.top = static_cast<int>(rng.uniform_int(0, height - w.height));
  w.left = static_cast<int>(rng.uniform_int(0, width - w.width));
  w.flip = rng.bernoulli(kFlipProbability);
  return w;
}

CropWindow center_window(int height, int width) {
  CropWindow w;
  w.height = crop_extent(height);
  w.width = crop_extent(width);
  w.top = (height - w.height) / 2;
  w.left = (width - w.width) / 2;
  return w;
}

Frame resize_bilinear(const Frame& frame, int height, int width) {
  const auto in_h = static_cast<int>(frame.rows()), in_w = static_cast<int>(frame.cols());
  const double sy = static_cast<double>(in_h) / height, sx = static_cast<double>(in_w) / width;
  Frame out(height, width);
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, in_h - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, in_h - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, in_w - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, in_w - 1);
      const double wx = fx - x0;
      const double top = (1 - wx) * frame(y0, x0) + wx * frame(y0, x1);
      const double bottom = (1 - wx) * frame(y1, x0) + wx * frame(y1, x1);
      out(y, x) = static_cast<float>(std::clamp((1 - wy) * top + wy * bottom, 0.0, 1.0));
    }
  }
  return out;
}

VideoClip flip_horizontal(const VideoClip& clip) {
  std::vector<Frame> frames;
  frames.reserve(clip.frames().size());
  for (const Frame& f : clip.frames()) frames.push_back(f.rowwise().reverse());
  return VideoClip(std::move(frames), clip.frame_rate());
}

VideoClip apply_window(const VideoClip& clip, const CropWindow& window) {
  if (window.top < 0 || window.left < 0 || window.height <= 0 || window.width <= 0 ||
      window.top + window.height > clip.height() || window.left + window.width > clip.width()) {
    throw ShapeError("crop window lies outside the frame");
  }
  std::vector<Frame> frames;
  frames.reserve(clip.frames().size());
  for (const Frame& f : clip.frames()) {
    Frame crop = f.block(window.top, window.left, window.height, window.width);
    Frame resized = resize_bilinear(crop, clip.height(), clip.width());
    if (window.flip) resized = resized.rowwise().reverse().eval();
    frames.push_back(std::move(resized));
  }
  return VideoClip(std::move(frames), clip.frame_rate());
}

VideoClip augment(const VideoClip& clip, Rng& rng) {
  return apply_window(clip, random_window(clip.height(), clip.width(), rng));
}

VideoClip center_crop(const VideoClip& clip) {
  return apply_window(clip, center_window(clip.height(), clip.width()));
}

Eigen::Index random_window_start(Eigen::Index length, Eigen::Index window, Rng& rng) {
  if (length <= window) return 0;
  return static_cast<Eigen::Index>(rng.uniform_int(0, length - window));
}

Eigen::VectorXd cut_window(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index start, Eigen::Index window) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(window);
  const Eigen::Index n = std::clamp<Eigen::Index>(x.size() - start, 0, window);
  if (n > 0) out.head(n) = x.segment(start, n);
  return out;
}

ClipPair sample_clip_window(const Waveform& real, const Waveform& fake, Rng& rng, double clip_seconds) {
  if (real.size() != fake.size()) {
    throw ShapeError("sample_clip_window: real has " + std::to_string(real.size()) + " samples but fake has " +
                     std::to_string(fake.size()));
  }
  if (real.size() == 0) throw ShapeError("sample_clip_window: empty waveforms");
  if (!(clip_seconds > 0.0)) throw ConfigError("sample_clip_window: clip_seconds must be positive");
  const auto window = static_cast<Eigen::Index>(std::lround(clip_seconds * real.sample_rate()));
  const Eigen::Index start = random_window_start(real.size(), window, rng);
  return {Waveform(cut_window(real.samples(), start, window), real.sample_rate()),
          Waveform(cut_window(fake.samples(), start, window), fake.sample_rate()), start};
}

}  // namespace v2s::data
