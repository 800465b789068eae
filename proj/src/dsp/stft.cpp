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

#include "v2s/dsp/stft.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "v2s/core/error.hpp"

namespace v2s::dsp {

int StftParams::window_length() const {
  return static_cast<int>(std::lround(sample_rate * window_ms / 1000.0));
}

int StftParams::hop_length() const {
  return static_cast<int>(std::lround(sample_rate * hop_ms / 1000.0));
}

void StftParams::validate() const {
  if (sample_rate <= 0 || fft_size <= 0 || window_length() < 1 || hop_length() < 1) {
    throw ConfigError("STFT parameters must be positive");
  }
  if (window_length() > fft_size) {
    throw ConfigError("STFT window length " + std::to_string(window_length()) +
                      " exceeds fft_size " + std::to_string(fft_size));
  }
  if (hop_length() > window_length()) {
    throw ConfigError("STFT hop exceeds window length");
  }
}

int StftParams::num_frames(Eigen::Index num_samples) const {
  const int win = window_length();
  if (num_samples < win) {
    throw ShapeError("signal of " + std::to_string(num_samples) +
                     " samples is shorter than the minimum length " + std::to_string(win));
  }
  return 1 + static_cast<int>((num_samples - win) / hop_length());
}

Eigen::VectorXd hann_window(int length) {
  Eigen::VectorXd w(length);
  for (int n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
  }
  return w;
}

Eigen::MatrixXd stft_power(const Eigen::Ref<const Eigen::VectorXd>& x, const StftParams& params) {
  params.validate();
  const int win = params.window_length();
  const int hop = params.hop_length();
  const int nfft = params.fft_size;
  const int frames = params.num_frames(x.size());
  const Eigen::VectorXd window = hann_window(win);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buf(static_cast<size_t>(nfft), 0.0);
  std::vector<std::complex<double>> spec;

  Eigen::MatrixXd power(params.num_bins(), frames);
  for (int l = 0; l < frames; ++l) {
    const Eigen::Index start = static_cast<Eigen::Index>(l) * hop;
    for (int n = 0; n < win; ++n) buf[static_cast<size_t>(n)] = window[n] * x[start + n];
    fft.fwd(spec, buf);
    for (int k = 0; k < params.num_bins(); ++k) power(k, l) = std::norm(spec[static_cast<size_t>(k)]);
  }
  return power;
}

Eigen::VectorXd stft_power_vjp(const Eigen::Ref<const Eigen::VectorXd>& x, const StftParams& params,
                               const Eigen::Ref<const Eigen::MatrixXd>& grad_power) {
  params.validate();
  const int win = params.window_length();
  const int hop = params.hop_length();
  const int nfft = params.fft_size;
  const int frames = params.num_frames(x.size());
  if (grad_power.rows() != params.num_bins() || grad_power.cols() != frames) {
    throw ShapeError("stft_power_vjp: gradient shape does not match the spectrogram");
  }
  const Eigen::VectorXd window = hann_window(win);

  Eigen::FFT<double> fwd;
  fwd.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  Eigen::FFT<double> inv;
  inv.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<double> buf(static_cast<size_t>(nfft), 0.0);
  std::vector<std::complex<double>> spec;
  std::vector<std::complex<double>> full(static_cast<size_t>(nfft));
  std::vector<std::complex<double>> back;

  // P_k = |X_k|^2 with X_k = sum_n w_n x_n e^{-2 pi i k n / nfft}, hence
  // dP_k/dx_n = 2 w_n Re(X_k e^{+2 pi i k n / nfft}) (X real-input symmetric terms excluded:
  // only the one-sided bins appear in the loss).
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
  for (int l = 0; l < frames; ++l) {
    const Eigen::Index start = static_cast<Eigen::Index>(l) * hop;
    for (int n = 0; n < win; ++n) buf[static_cast<size_t>(n)] = window[n] * x[start + n];
    fwd.fwd(spec, buf);
    std::fill(full.begin(), full.end(), std::complex<double>(0.0, 0.0));
    for (int k = 0; k < params.num_bins(); ++k) {
      full[static_cast<size_t>(k)] = grad_power(k, l) * spec[static_cast<size_t>(k)];
    }
    inv.inv(back, full);
    for (int n = 0; n < win; ++n) {
      grad[start + n] += 2.0 * window[n] * back[static_cast<size_t>(n)].real();
    }
  }
  return grad;
}

Eigen::MatrixXd stft_magnitude(const Waveform& waveform, const StftParams& params) {
  return stft_power(waveform.samples(), params).cwiseSqrt();
}

Eigen::MatrixXd log_power_spectrogram(const Eigen::Ref<const Eigen::VectorXd>& x,
                                      const StftParams& params, double floor) {
  if (!(floor > 0)) throw ConfigError("log floor must be > 0");
  return stft_power(x, params).cwiseMax(floor).array().log().matrix();
}

Eigen::MatrixXd log_power_spectrogram(const Waveform& waveform, const StftParams& params,
                                      double floor) {
  return log_power_spectrogram(waveform.samples(), params, floor);
}

Eigen::VectorXd log_power_spectrogram_vjp(const Eigen::Ref<const Eigen::VectorXd>& x,
                                          const StftParams& params, double floor,
                                          const Eigen::Ref<const Eigen::MatrixXd>& grad_logspec) {
  const Eigen::MatrixXd power = stft_power(x, params);
  if (grad_logspec.rows() != power.rows() || grad_logspec.cols() != power.cols()) {
    throw ShapeError("log_power_spectrogram_vjp: gradient shape does not match the spectrogram");
  }
  Eigen::MatrixXd grad_power =
      (power.array() > floor).select(grad_logspec.array() / power.array(), 0.0).matrix();
  return stft_power_vjp(x, params, grad_power);
}

namespace {

struct Moments {
  double mean;
  double stddev;  // floored
  bool floored;
};

Moments moments(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const double mean = m.mean();
  const double var = (m.array() - mean).square().mean();
  const double sd = std::sqrt(var);
  return {mean, std::max(sd, kNormalizeStdFloor), sd < kNormalizeStdFloor};
}

}  // namespace

NormalizedSpectrogram normalize_for_critic(const Eigen::Ref<const Eigen::MatrixXd>& logspec) {
  if (logspec.size() == 0) throw ShapeError("normalize_for_critic: empty matrix");
  // A constant matrix standardizes to zero; rounding in the mean would
  // otherwise be amplified by the std floor.
  if (logspec.maxCoeff() == logspec.minCoeff()) {
    return NormalizedSpectrogram(Eigen::MatrixXd::Zero(logspec.rows(), logspec.cols()));
  }
  const Moments mo = moments(logspec);
  Eigen::MatrixXd z = ((logspec.array() - mo.mean) / mo.stddev)
                          .cwiseMax(-kNormalizeClip)
                          .cwiseMin(kNormalizeClip)
                          .matrix() /
                      kNormalizeClip;
  return NormalizedSpectrogram(std::move(z));
}

Eigen::MatrixXd normalize_for_critic_vjp(const Eigen::Ref<const Eigen::MatrixXd>& logspec,
                                         const Eigen::Ref<const Eigen::MatrixXd>& grad_out) {
  const Moments mo = moments(logspec);
  const Eigen::ArrayXXd z = (logspec.array() - mo.mean) / mo.stddev;
  const Eigen::ArrayXXd gz =
      (z.abs() < kNormalizeClip).select(grad_out.array() / kNormalizeClip, 0.0);
  if (mo.floored) return ((gz - gz.mean()) / mo.stddev).matrix();
  return ((gz - gz.mean() - z * (gz * z).mean()) / mo.stddev).matrix();
}

}  // namespace v2s::dsp
