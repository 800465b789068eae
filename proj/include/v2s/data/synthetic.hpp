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

#ifndef V2S_DATA_SYNTHETIC_HPP_
#define V2S_DATA_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "v2s/core/types.hpp"

namespace v2s::data {

/// A toy audiovisual corpus: each video frame shows a horizontal bar whose
/// height encodes which tone sounds during that frame.
struct SyntheticSpec {
  int num_clips = 20;
  int frames_per_clip = 25;
  std::vector<double> tones = {300.0, 500.0, 800.0, 1200.0};
  std::uint64_t seed = 0;
  /// Probability that a frame is silent (black frame, zero audio).
  double silence_prob = 0.0;
  int frame_size = kDefaultFrameSize;
  int sample_rate = kDefaultSampleRate;
  int frame_rate = kDefaultFrameRate;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

inline constexpr int kSilence = -1;
inline constexpr double kToneAmplitude = 0.5;

/// Per-frame symbols: a tone index or kSilence.
using ToneSequence = std::vector<int>;

/// Black frame with a white bar for `symbol`; all black for kSilence.
Frame render_tone_frame(int symbol, int num_tones, int frame_size);
/// Rows covered by the bar of tone `index` as [first, last).
std::pair<int, int> bar_rows(int index, int num_tones, int frame_size);

/// Concatenated sine segments with continuous phase across the whole clip.
Waveform render_tone_audio(const ToneSequence& symbols, const std::vector<double>& tones, int samples_per_frame,
                           int sample_rate = kDefaultSampleRate);
VideoClip render_tone_video(const ToneSequence& symbols, int num_tones, int frame_size,
                            int frame_rate = kDefaultFrameRate);

/// Space-separated tone indices of the voiced frames.
std::string tone_transcript(const ToneSequence& symbols);

/// Reads the symbol back from a frame by locating the brightest row band.
/// Returns kSilence for a dark frame.
int decode_tone_frame(const Frame& frame, int num_tones);

/// Draws the per-frame symbols of clip `index` of a corpus.
ToneSequence synthetic_symbols(const SyntheticSpec& spec, int index);

/// Number of clips in each split of an n-clip corpus: val and test get
/// floor(5%) each, train the rest.
struct SplitCounts {
  int train;
  int val;
  int test;
};
SplitCounts split_counts(int num_clips);

/// Writes video/<id>.v2sf, audio/<id>.wav, transcripts/<id>.txt,
/// synthetic.json and manifest.jsonl under out_dir; returns the manifest
/// path. Output bytes depend only on `spec`.
std::string make_synthetic_corpus(const SyntheticSpec& spec, const std::string& out_dir);

/// Tone frequencies recorded by make_synthetic_corpus next to a manifest.
/// Throws IoError when the metadata file is absent.
std::vector<double> load_synthetic_tones(const std::string& manifest_path);

}  // namespace v2s::data

#endif  // V2S_DATA_SYNTHETIC_HPP_
