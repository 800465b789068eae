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

#ifndef V2S_EVAL_METRICS_HPP_
#define V2S_EVAL_METRICS_HPP_

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "v2s/core/types.hpp"
#include "v2s/dsp/mel.hpp"

namespace v2s::eval {

/// Rational resampling by up/down with a Kaiser-windowed sinc low-pass
/// (beta 5, half length 10 * max(up, down) input-rate taps), delay-compensated
/// so the output has ceil(n * up / down) samples.
Eigen::VectorXd resample(const Eigen::Ref<const Eigen::VectorXd>& x, int up, int down);

/// Short-time objective intelligibility with the reference conventions:
/// 10 kHz analysis rate, 256-sample Hann frames with hop 128 and 512-point
/// FFT, silent frames (40 dB below the loudest) dropped, 15 one-third octave
/// bands from 150 Hz, 30-frame segments, -15 dB clipping. Throws ShapeError
/// on unequal lengths or when fewer than 30 frames remain.
double stoi(const Waveform& clean, const Waveform& degraded);

inline constexpr double kStoiRate = 10000.0;
inline constexpr int kStoiSegment = 30;

/// Mel-cepstral distance: (10 / ln 10) * sqrt(2) * mean over frames of the
/// Euclidean distance between MFCC vectors without the 0th coefficient.
/// Throws ShapeError on unequal lengths.
double mcd(const Waveform& reference, const Waveform& estimate, const dsp::MfccParams& params = {});
/// The same from precomputed MFCC matrices (coefficients x frames).
double mcd_from_mfcc(const Eigen::Ref<const Eigen::MatrixXd>& reference, const Eigen::Ref<const Eigen::MatrixXd>& estimate);

/// Scale of the per-frame cepstral distance.
double mcd_scale();

struct WordErrors {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int reference_words = 0;

  double rate() const;
};

/// Minimum edit alignment with unit costs. The backtrace prefers a
/// substitution over a deletion or insertion at every tie, so the counts
/// follow the conventional alignment. Words compare case-insensitively.
/// Throws RangeError for an empty reference.
WordErrors word_errors(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis);
double wer(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis);

/// Whitespace tokenization.
std::vector<std::string> split_words(const std::string& text);

}  // namespace v2s::eval

#endif  // V2S_EVAL_METRICS_HPP_
