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

#ifndef V2S_DATA_AUGMENT_HPP_
#define V2S_DATA_AUGMENT_HPP_

#include <Eigen/Dense>

#include "v2s/core/rng.hpp"
#include "v2s/core/types.hpp"

namespace v2s::data {

inline constexpr double kCropFraction = 0.9;
inline constexpr double kFlipProbability = 0.5;

/// One crop window (shared by every frame of a clip) and a flip flag.
struct CropWindow {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;
  bool flip = false;
};

/// Window of round(0.9 H) x round(0.9 W) at a uniform offset, flip with p = 0.5.
CropWindow random_window(int height, int width, Rng& rng);
/// The same window size centered, no flip.
CropWindow center_window(int height, int width);

/// Crops every frame, resizes bilinearly back to H x W and optionally mirrors
/// left-right.
VideoClip apply_window(const VideoClip& clip, const CropWindow& window);

/// Mirrors every frame left-right.
VideoClip flip_horizontal(const VideoClip& clip);

/// Bilinear resize with half-pixel centers and edge clamping.
Frame resize_bilinear(const Frame& frame, int height, int width);

/// Training-time augmentation: apply_window(clip, random_window(...)).
VideoClip augment(const VideoClip& clip, Rng& rng);
/// Test-time counterpart: deterministic center crop, no flip.
VideoClip center_crop(const VideoClip& clip);

/// Start offset of a `window`-sample excerpt of a `length`-sample signal,
/// uniform over [0, length - window]; 0 when the signal is shorter.
Eigen::Index random_window_start(Eigen::Index length, Eigen::Index window, Rng& rng);

/// `window` samples from `start`, zero-padded on the right past the end.
Eigen::VectorXd cut_window(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index start, Eigen::Index window);

struct ClipPair {
  Waveform real;
  Waveform fake;
  Eigen::Index start = 0;
};

/// Cuts the same clip_seconds window from both waveforms. Throws ShapeError
/// when their lengths differ or are zero.
ClipPair sample_clip_window(const Waveform& real, const Waveform& fake, Rng& rng, double clip_seconds = 1.0);

}  // namespace v2s::data

#endif  // V2S_DATA_AUGMENT_HPP_
