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

#include "v2s/dsp/mel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "v2s/core/error.hpp"

namespace v2s::dsp {

void MfccParams::validate() const {
  stft.validate();
  if (num_mel_bands < 1) throw ConfigError("num_mel_bands must be ≥ 1");
  if (num_coefficients < 1 || num_coefficients > num_mel_bands) {
    throw ConfigError("num_coefficients must be in [1, num_mel_bands]");
  }
  if (!(mel_fmin >= 0 && mel_fmin < mel_fmax)) throw ConfigError("mel_fmin must be in [0, mel_fmax)");
  if (mel_fmax > stft.sample_rate / 2.0) {
    throw ConfigError("mel_fmax " + std::to_string(mel_fmax) + " Hz exceeds the Nyquist frequency " +
                      std::to_string(stft.sample_rate / 2.0) + " Hz");
  }
  if (!(floor > 0)) throw ConfigError("log floor must be > 0");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

namespace {

// num_mel_bands + 2 edge frequencies equally spaced in mel.
Eigen::VectorXd mel_edges(const MfccParams& p) {
  const double lo = hz_to_mel(p.mel_fmin);
  const double hi = hz_to_mel(p.mel_fmax);
  Eigen::VectorXd edges(p.num_mel_bands + 2);
  for (int i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * i / (p.num_mel_bands + 1));
  }
  return edges;
}

}  // namespace

Eigen::VectorXd mel_center_frequencies(const MfccParams& params) {
  params.validate();
  return mel_edges(params).segment(1, params.num_mel_bands);
}

Eigen::MatrixXd mel_filterbank(const MfccParams& params) {
  params.validate();
  const Eigen::VectorXd edges = mel_edges(params);
  const int bins = params.stft.num_bins();
  const double bin_hz = static_cast<double>(params.stft.sample_rate) / params.stft.fft_size;
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(params.num_mel_bands, bins);
  for (int m = 0; m < params.num_mel_bands; ++m) {
    const double lo = edges[m];
    const double center = edges[m + 1];
    const double hi = edges[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      const double rise = (f - lo) / (center - lo);
      const double fall = (hi - f) / (hi - center);
      fb(m, k) = std::max(0.0, std::min(rise, fall));
    }
  }
  return fb;
}

Eigen::MatrixXd dct_matrix(int num_out, int num_in) {
  Eigen::MatrixXd d(num_out, num_in);
  for (int k = 0; k < num_out; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / num_in) : std::sqrt(2.0 / num_in);
    for (int n = 0; n < num_in; ++n) {
      d(k, n) = scale * std::cos(std::numbers::pi * k * (2 * n + 1) / (2.0 * num_in));
    }
  }
  return d;
}

Eigen::MatrixXd mel_spectrogram(const Eigen::Ref<const Eigen::VectorXd>& x, const MfccParams& params) {
  const Eigen::MatrixXd energies = mel_filterbank(params) * stft_power(x, params.stft);
  return energies.cwiseMax(params.floor).array().log().matrix();
}

Eigen::MatrixXd mel_spectrogram(const Waveform& waveform, const MfccParams& params) {
  return mel_spectrogram(waveform.samples(), params);
}

Eigen::MatrixXd mfcc(const Eigen::Ref<const Eigen::VectorXd>& x, const MfccParams& params) {
  return dct_matrix(params.num_coefficients, params.num_mel_bands) * mel_spectrogram(x, params);
}

Eigen::MatrixXd mfcc(const Waveform& waveform, const MfccParams& params) {
  return mfcc(waveform.samples(), params);
}

Eigen::VectorXd mel_spectrogram_vjp(const Eigen::Ref<const Eigen::VectorXd>& x,
                                    const MfccParams& params,
                                    const Eigen::Ref<const Eigen::MatrixXd>& grad_melspec) {
  const Eigen::MatrixXd fb = mel_filterbank(params);
  const Eigen::MatrixXd power = stft_power(x, params.stft);
  const Eigen::MatrixXd energies = fb * power;
  if (grad_melspec.rows() != energies.rows() || grad_melspec.cols() != energies.cols()) {
    throw ShapeError("mel_spectrogram_vjp: gradient shape does not match the mel spectrogram");
  }
  const Eigen::MatrixXd grad_energies =
      (energies.array() > params.floor).select(grad_melspec.array() / energies.array(), 0.0).matrix();
  return stft_power_vjp(x, params.stft, fb.transpose() * grad_energies);
}

Eigen::VectorXd mfcc_vjp(const Eigen::Ref<const Eigen::VectorXd>& x, const MfccParams& params,
                         const Eigen::Ref<const Eigen::MatrixXd>& grad_mfcc) {
  const Eigen::MatrixXd dct = dct_matrix(params.num_coefficients, params.num_mel_bands);
  return mel_spectrogram_vjp(x, params, dct.transpose() * grad_mfcc);
}

}  // namespace v2s::dsp
