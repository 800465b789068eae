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

#ifndef V2S_DSP_STFT_HPP_
#define V2S_DSP_STFT_HPP_

#include <Eigen/Dense>

#include "v2s/core/types.hpp"

namespace v2s::dsp {

/// Short-time Fourier transform settings: Hann window, no center padding.
struct StftParams {
  double window_ms = 25.0;
  double hop_ms = 10.0;
  int fft_size = 512;
  int sample_rate = kDefaultSampleRate;

  int window_length() const;
  int hop_length() const;
  int num_bins() const { return fft_size / 2 + 1; }
  /// 1 + floor((num_samples - window) / hop). Throws ShapeError when too short.
  int num_frames(Eigen::Index num_samples) const;
  void validate() const;
};

inline constexpr double kDefaultLogFloor = 1e-10;

/// Periodic Hann window of the analysis length.
Eigen::VectorXd hann_window(int length);

/// |STFT|^2, num_bins x num_frames.
Eigen::MatrixXd stft_power(const Eigen::Ref<const Eigen::VectorXd>& x, const StftParams& params);

/// Given dL/d(power), returns dL/dx.
Eigen::VectorXd stft_power_vjp(const Eigen::Ref<const Eigen::VectorXd>& x, const StftParams& params,
                               const Eigen::Ref<const Eigen::MatrixXd>& grad_power);

Eigen::MatrixXd stft_magnitude(const Waveform& waveform, const StftParams& params = {});

/// ln(max(|STFT|^2, floor)).
Eigen::MatrixXd log_power_spectrogram(const Eigen::Ref<const Eigen::VectorXd>& x,
                                      const StftParams& params, double floor = kDefaultLogFloor);
Eigen::MatrixXd log_power_spectrogram(const Waveform& waveform, const StftParams& params = {},
                                      double floor = kDefaultLogFloor);

/// Floored entries contribute no gradient.
Eigen::VectorXd log_power_spectrogram_vjp(const Eigen::Ref<const Eigen::VectorXd>& x,
                                          const StftParams& params, double floor,
                                          const Eigen::Ref<const Eigen::MatrixXd>& grad_logspec);

inline constexpr double kNormalizeStdFloor = 1e-8;
inline constexpr double kNormalizeClip = 3.0;

/// Standardize by the matrix's own mean and population std, clip to
/// [-3,3] and divide by 3.
NormalizedSpectrogram normalize_for_critic(const Eigen::Ref<const Eigen::MatrixXd>& logspec);

/// Gradient through normalize_for_critic, including the dependence of the
/// mean and std on every entry. Clipped entries pass no gradient.
Eigen::MatrixXd normalize_for_critic_vjp(const Eigen::Ref<const Eigen::MatrixXd>& logspec,
                                         const Eigen::Ref<const Eigen::MatrixXd>& grad_out);

}  // namespace v2s::dsp

#endif  // V2S_DSP_STFT_HPP_
