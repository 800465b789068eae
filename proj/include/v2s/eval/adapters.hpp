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

#ifndef V2S_EVAL_ADAPTERS_HPP_
#define V2S_EVAL_ADAPTERS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "v2s/core/types.hpp"

namespace v2s::eval {

/// Outcome of an external tool call: a value, or none plus a diagnostic.
template <typename T>
struct AdapterResult {
  std::optional<T> value;
  std::string diagnostic;
};

/// Runs an external PESQ tool; `{ref}` and `{deg}` in the template become
/// the two WAV paths and the last number printed is the score. An empty
/// template yields no value and no diagnostic.
AdapterResult<double> pesq_adapter(const std::string& command_template, const std::string& ref_path,
                                   const std::string& deg_path);

/// Runs an external recognizer; `{wav}` becomes the WAV path and the
/// printed text, split on whitespace, is the hypothesis.
AdapterResult<std::vector<std::string>> asr_adapter(const std::string& command_template, const std::string& wav_path);

/// Recognizer for the synthetic tone corpus: every frame-length segment
/// whose RMS reaches the threshold becomes the index of the tone nearest to
/// its DFT magnitude peak; quieter segments emit nothing.
class OracleAsr {
 public:
  static constexpr double kDefaultRmsThreshold = 0.05;

  OracleAsr(std::vector<double> tones, int samples_per_frame, int sample_rate = kDefaultSampleRate,
            double rms_threshold = kDefaultRmsThreshold);

  std::vector<std::string> transcribe(const Waveform& audio) const;
  /// Tone index of one segment or -1 when it is below the threshold.
  int classify(const Eigen::Ref<const Eigen::VectorXd>& segment) const;

 private:
  std::vector<double> tones_;
  int samples_per_frame_;
  int sample_rate_;
  double rms_threshold_;
};

}  // namespace v2s::eval

#endif  // V2S_EVAL_ADAPTERS_HPP_
