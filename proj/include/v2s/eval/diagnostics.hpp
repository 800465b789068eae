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

#ifndef V2S_EVAL_DIAGNOSTICS_HPP_
#define V2S_EVAL_DIAGNOSTICS_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "v2s/core/types.hpp"
#include "v2s/dsp/mel.hpp"

namespace v2s::eval {

using GrayImage = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// |log-mel(x) - log-mel(y)|, bands x frames. Throws ShapeError on unequal
/// lengths.
Eigen::MatrixXd spectrogram_difference(const Waveform& x, const Waveform& y, const dsp::MfccParams& params = {});

/// Linear map of [0, max] to [255, 0] (zero is white); the lowest row of
/// the matrix becomes the bottom image row. An all-zero matrix is all white.
GrayImage difference_image(const Eigen::Ref<const Eigen::MatrixXd>& diff);

/// Linear map of [min, max] to [0, 255], lowest row at the bottom.
GrayImage intensity_image(const Eigen::Ref<const Eigen::MatrixXd>& values);

/// Amplitude trace: per pixel column, the min..max sample range is drawn
/// black on white around a mid line for the [-1, 1] range.
GrayImage waveform_image(const Eigen::Ref<const Eigen::VectorXd>& samples, int width = 1000, int height = 200);

/// 8-bit grayscale PNG. Throws IoError when the file cannot be written.
void write_png(const GrayImage& image, const std::string& path);
/// Reads an 8-bit grayscale PNG written by write_png.
GrayImage read_png(const std::string& path);

}  // namespace v2s::eval

#endif  // V2S_EVAL_DIAGNOSTICS_HPP_
