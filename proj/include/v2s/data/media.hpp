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

#ifndef V2S_DATA_MEDIA_HPP_
#define V2S_DATA_MEDIA_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "v2s/core/types.hpp"

namespace v2s::data {

/// Raw-frame video container: "V2SF", u8 version, u16 T, H, W (little
/// endian), then T*H*W intensity bytes, row-major, frame after frame.
inline constexpr char kVideoMagic[4] = {'V', '2', 'S', 'F'};
inline constexpr std::uint8_t kVideoVersion = 1;

std::vector<std::uint8_t> encode_video(const VideoClip& clip);
/// Intensities are byte / 255. Throws FormatError on a bad magic, version,
/// zero-sized dimension or payload size.
VideoClip decode_video(const std::vector<std::uint8_t>& bytes, int frame_rate = kDefaultFrameRate);

/// Intensities are rounded to the nearest 1/255.
void save_video(const VideoClip& clip, const std::string& path);
VideoClip load_video(const std::string& path, int frame_rate = kDefaultFrameRate);

/// RIFF WAV, 16-bit PCM, mono. Samples decode as s / 32768.
std::vector<std::uint8_t> encode_wav(const Waveform& waveform);
/// Throws FormatError naming the expected format when the header is not
/// mono 16-bit PCM at `expected_rate`.
Waveform decode_wav(const std::vector<std::uint8_t>& bytes, int expected_rate = kDefaultSampleRate);

/// Samples are rounded to the nearest 1/32768 and saturate at 32767.
void save_audio(const Waveform& waveform, const std::string& path);
Waveform load_audio(const std::string& path, int expected_rate = kDefaultSampleRate);

std::vector<std::uint8_t> read_file(const std::string& path);
/// Writes through a temporary file in the same directory, then renames.
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace v2s::data

#endif  // V2S_DATA_MEDIA_HPP_
