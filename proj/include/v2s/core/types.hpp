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

#ifndef V2S_CORE_TYPES_HPP_
#define V2S_CORE_TYPES_HPP_

#include <Eigen/Dense>

#include <vector>

namespace v2s {

inline constexpr int kDefaultSampleRate = 16000;
inline constexpr int kDefaultFrameRate = 25;
inline constexpr int kDefaultFrameSize = 96;

/// One single-channel video frame, H x W, row-major, intensities in [0,1].
using Frame = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A temporal stack of mouth-ROI frames.
///
/// All frames share one size and every intensity lies in [0,1]; the
/// constructor throws RangeError / ShapeError otherwise.
class VideoClip {
 public:
  VideoClip(std::vector<Frame> frames, int frame_rate = kDefaultFrameRate);

  int num_frames() const { return static_cast<int>(frames_.size()); }
  int height() const { return static_cast<int>(frames_.front().rows()); }
  int width() const { return static_cast<int>(frames_.front().cols()); }
  int frame_rate() const { return frame_rate_; }
  const Frame& frame(int t) const { return frames_[static_cast<size_t>(t)]; }
  const std::vector<Frame>& frames() const { return frames_; }

 private:
  std::vector<Frame> frames_;
  int frame_rate_;
};

/// Mono audio with amplitude in [-1,1].
class Waveform {
 public:
  /// Throws RangeError when a sample is outside [-1,1] or not finite.
  explicit Waveform(Eigen::VectorXd samples, int sample_rate = kDefaultSampleRate);

  /// Ingestion path for real audio: clamps to [-1,1] instead of failing.
  static Waveform clamped(Eigen::VectorXd samples, int sample_rate = kDefaultSampleRate);

  Eigen::Index size() const { return samples_.size(); }
  int sample_rate() const { return sample_rate_; }
  const Eigen::VectorXd& samples() const { return samples_; }
  double seconds() const { return static_cast<double>(size()) / sample_rate_; }

 private:
  struct Unchecked {};
  Waveform(Eigen::VectorXd samples, int sample_rate, Unchecked);

  Eigen::VectorXd samples_;
  int sample_rate_;
};

/// T x D matrix of per-frame visual features.
struct FeatureSequence {
  Eigen::MatrixXd features;
  Eigen::Index num_frames() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

/// Critic-ready log-power spectrogram, F x L, every value in [-1,1].
class NormalizedSpectrogram {
 public:
  explicit NormalizedSpectrogram(Eigen::MatrixXd values);
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index num_bins() const { return values_.rows(); }
  Eigen::Index num_frames() const { return values_.cols(); }

 private:
  Eigen::MatrixXd values_;
};

/// Coefficients of the weighted generator objective and the gradient-penalty
/// coefficient shared by both critics.
struct LossWeights {
  double alpha_adv = 1.0;
  double alpha_pase = 140.0;
  double alpha_power = 50.0;
  double alpha_mfcc = 0.4;
  double gp_lambda = 10.0;

  bool operator==(const LossWeights&) const = default;
};

/// Audio samples generated per video frame. Throws ConfigError when the
/// frame rate does not divide the sample rate.
int samples_per_frame(int sample_rate, int frame_rate);

}  // namespace v2s

#endif  // V2S_CORE_TYPES_HPP_
