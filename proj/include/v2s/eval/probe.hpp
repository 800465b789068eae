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

#ifndef V2S_EVAL_PROBE_HPP_
#define V2S_EVAL_PROBE_HPP_

#include <string>

#include "v2s/core/types.hpp"
#include "v2s/training/checkpoint.hpp"

namespace v2s::eval {

struct SilentProbeReport {
  Waveform audio;
  double rms = 0.0;
  double peak = 0.0;
};

/// Synthesizes speech for a motionless mouth: `seconds` of identical
/// frames showing the synthetic corpus's silent (all dark) frame.
SilentProbeReport silent_probe(training::LoadedGenerator& generator, double seconds);
SilentProbeReport silent_probe(const std::string& checkpoint_dir, double seconds);

double rms(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Writes silent.wav, waveform.png, spectrogram.png and report.txt.
void write_probe_outputs(const SilentProbeReport& report, const std::string& out_dir);

}  // namespace v2s::eval

#endif  // V2S_EVAL_PROBE_HPP_
