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

#include "v2s/data/media.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "v2s/core/error.hpp"

namespace v2s::data {

namespace {

constexpr size_t kVideoHeaderSize = 11;
constexpr const char* kWavFormat = "mono 16-bit PCM WAV";

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

std::uint16_t get_u16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t checked_dim(int v, const char* what) {
  if (v <= 0 || v > 0xffff) throw ShapeError(std::string("video ") + what + " does not fit the container");
  return static_cast<std::uint16_t>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_video(const VideoClip& clip) {
  std::vector<std::uint8_t> out(std::begin(kVideoMagic), std::end(kVideoMagic));
  out.push_back(kVideoVersion);
  put_u16(out, checked_dim(clip.num_frames(), "length"));
  put_u16(out, checked_dim(clip.height(), "height"));
  put_u16(out, checked_dim(clip.width(), "width"));
  out.reserve(out.size() + static_cast<size_t>(clip.num_frames()) * clip.height() * clip.width());
  for (const Frame& f : clip.frames()) {
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(f.data()[i], 0.0f, 1.0f) * 255.0f)));
    }
  }
  return out;
}

VideoClip decode_video(const std::vector<std::uint8_t>& bytes, int frame_rate) {
  const std::string expected = "expected a V2SF video container (version 1)";
  if (bytes.size() < kVideoHeaderSize || std::memcmp(bytes.data(), kVideoMagic, 4) != 0) {
    throw FormatError(expected + ": bad magic or truncated header");
  }
  if (bytes[4] != kVideoVersion) {
    throw FormatError(expected + ", got version " + std::to_string(bytes[4]));
  }
  const int t = get_u16(&bytes[5]), h = get_u16(&bytes[7]), w = get_u16(&bytes[9]);
  if (t == 0 || h == 0 || w == 0) throw FormatError(expected + ": zero-sized dimension");
  const size_t payload = static_cast<size_t>(t) * h * w;
  if (bytes.size() != kVideoHeaderSize + payload) {
    throw FormatError(expected + ": header declares " + std::to_string(t) + "x" + std::to_string(h) + "x" +
                      std::to_string(w) + " (" + std::to_string(payload) + " bytes) but payload has " +
                      std::to_string(bytes.size() - kVideoHeaderSize) + " bytes");
  }
  std::vector<Frame> frames;
  frames.reserve(static_cast<size_t>(t));
  const std::uint8_t* p = bytes.data() + kVideoHeaderSize;
  for (int k = 0; k < t; ++k) {
    Frame f(h, w);
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = static_cast<float>(*p++) / 255.0f;
    frames.push_back(std::move(f));
  }
  return VideoClip(std::move(frames), frame_rate);
}

void save_video(const VideoClip& clip, const std::string& path) { write_file(path, encode_video(clip)); }

VideoClip load_video(const std::string& path, int frame_rate) {
  try {
    return decode_video(read_file(path), frame_rate);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const Waveform& waveform) {
  const auto n = static_cast<std::uint32_t>(waveform.size());
  const std::uint32_t data_bytes = 2 * n;
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(waveform.sample_rate()));
  put_u32(out, static_cast<std::uint32_t>(waveform.sample_rate()) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (Eigen::Index i = 0; i < waveform.size(); ++i) {
    const long q = std::clamp(std::lround(waveform.samples()[i] * 32768.0), -32768L, 32767L);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

Waveform decode_wav(const std::vector<std::uint8_t>& bytes, int expected_rate) {
  const std::string expected = std::string("expected ") + kWavFormat + " at " + std::to_string(expected_rate) + " Hz";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(expected + ": not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = get_u32(&bytes[pos + 4]);
    const size_t body = pos + 8;
    if (body + size > bytes.size()) throw FormatError(expected + ": truncated chunk");
    if (std::memcmp(&bytes[pos], "fmt ", 4) == 0) {
      if (size < 16) throw FormatError(expected + ": short fmt chunk");
      const int format = get_u16(&bytes[body]), channels = get_u16(&bytes[body + 2]);
      const auto rate = static_cast<int>(get_u32(&bytes[body + 4]));
      const int bits = get_u16(&bytes[body + 14]);
      if (format != 1) throw FormatError(expected + ", got format code " + std::to_string(format));
      if (channels != 1) throw FormatError(expected + ", got " + std::to_string(channels) + " channels");
      if (bits != 16) throw FormatError(expected + ", got " + std::to_string(bits) + "-bit samples");
      if (rate != expected_rate) throw FormatError(expected + ", got " + std::to_string(rate) + " Hz");
      have_fmt = true;
    } else if (std::memcmp(&bytes[pos], "data", 4) == 0) {
      if (!have_fmt) throw FormatError(expected + ": data chunk before fmt chunk");
      if (size % 2 != 0) throw FormatError(expected + ": odd data size");
      Eigen::VectorXd samples(size / 2);
      for (Eigen::Index i = 0; i < samples.size(); ++i) {
        samples[i] = static_cast<std::int16_t>(get_u16(&bytes[body + 2 * static_cast<size_t>(i)])) / 32768.0;
      }
      return Waveform(std::move(samples), expected_rate);
    }
    pos = body + size + (size & 1u);
  }
  throw FormatError(expected + ": no data chunk");
}

void save_audio(const Waveform& waveform, const std::string& path) { write_file(path, encode_wav(waveform)); }

Waveform load_audio(const std::string& path, int expected_rate) {
  try {
    return decode_wav(read_file(path), expected_rate);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(target.parent_path(), ec);
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("cannot write " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw IoError("cannot write " + path + ": " + ec.message());
}

}  // namespace v2s::data
