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

#ifndef V2S_DSP_MEL_HPP_
#define V2S_DSP_MEL_HPP_

#include <Eigen/Dense>

#include "v2s/core/types.hpp"
#include "v2s/dsp/stft.hpp"

namespace v2s::dsp {

struct MfccParams {
  int num_coefficients = 25;
  int num_mel_bands = 40;
  double mel_fmin = 0.0;
  double mel_fmax = 8000.0;
  double floor = kDefaultLogFloor;
  StftParams stft;

  void validate() const;
};

/// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Center frequencies (Hz) of the triangular filters, ascending.
Eigen::VectorXd mel_center_frequencies(const MfccParams& params);

/// Triangular filters, num_mel_bands x num_bins.
Eigen::MatrixXd mel_filterbank(const MfccParams& params);

/// Orthonormal DCT-II basis restricted to the first `num_out` rows.
Eigen::MatrixXd dct_matrix(int num_out, int num_in);

/// ln(max(filterbank * |STFT|^2, floor)), num_mel_bands x frames.
Eigen::MatrixXd mel_spectrogram(const Eigen::Ref<const Eigen::VectorXd>& x, const MfccParams& params);
Eigen::MatrixXd mel_spectrogram(const Waveform& waveform, const MfccParams& params = {});

/// First num_coefficients DCT-II coefficients of the log mel energies.
Eigen::MatrixXd mfcc(const Eigen::Ref<const Eigen::VectorXd>& x, const MfccParams& params);
Eigen::MatrixXd mfcc(const Waveform& waveform, const MfccParams& params = {});

Eigen::VectorXd mel_spectrogram_vjp(const Eigen::Ref<const Eigen::VectorXd>& x,
                                    const MfccParams& params,
                                    const Eigen::Ref<const Eigen::MatrixXd>& grad_melspec);
Eigen::VectorXd mfcc_vjp(const Eigen::Ref<const Eigen::VectorXd>& x, const MfccParams& params,
                         const Eigen::Ref<const Eigen::MatrixXd>& grad_mfcc);

}  // namespace v2s::dsp

#endif  // V2S_DSP_MEL_HPP_
