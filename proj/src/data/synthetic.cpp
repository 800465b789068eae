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

#include "v2s/data/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "v2s/core/error.hpp"
#include "v2s/core/rng.hpp"
#include "v2s/data/manifest.hpp"
#include "v2s/data/media.hpp"

namespace v2s::data {

namespace fs = std::filesystem;

namespace {

constexpr const char* kMetadataFile = "synthetic.json";
constexpr std::uint64_t kSymbolStream = 0x70e5;

std::string clip_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "syn%05d", index);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path.string(), std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace

void SyntheticSpec::validate() const {
  if (num_clips < 1) throw ConfigError("num_clips must be at least 1");
  if (frames_per_clip < 1) throw ConfigError("frames_per_clip must be at least 1");
  if (tones.empty()) throw ConfigError("tones must list at least one frequency");
  for (double f : tones) {
    if (!(f > 0.0) || !(f < sample_rate / 2.0)) {
      std::ostringstream os;
      os << "tones: " << f << " Hz is not in (0, " << sample_rate / 2 << ") Hz";
      throw ConfigError(os.str());
    }
  }
  if (!(silence_prob >= 0.0 && silence_prob < 1.0)) throw ConfigError("silence_prob must lie in [0, 1)");
  if (frame_size < 8) throw ConfigError("frame_size must be at least 8");
  samples_per_frame(sample_rate, frame_rate);
}

std::pair<int, int> bar_rows(int index, int num_tones, int frame_size) {
  const double center = (index + 1.0) * frame_size / (num_tones + 1.0);
  const int height = std::max(2, static_cast<int>(std::lround(frame_size / (2.0 * (num_tones + 1)))));
  const int first = std::clamp(static_cast<int>(std::lround(center - height / 2.0)), 0, frame_size - height);
  return {first, first + height};
}

Frame render_tone_frame(int symbol, int num_tones, int frame_size) {
  Frame f = Frame::Zero(frame_size, frame_size);
  if (symbol == kSilence) return f;
  if (symbol < 0 || symbol >= num_tones) throw RangeError("tone index " + std::to_string(symbol) + " out of range");
  const auto [first, last] = bar_rows(symbol, num_tones, frame_size);
  f.middleRows(first, last - first).setOnes();
  return f;
}

Waveform render_tone_audio(const ToneSequence& symbols, const std::vector<double>& tones, int samples_per_frame,
                           int sample_rate) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(symbols.size()) * samples_per_frame);
  double phase = 0.0;
  Eigen::Index i = 0;
  for (int s : symbols) {
    if (s != kSilence && (s < 0 || s >= static_cast<int>(tones.size()))) {
      throw RangeError("tone index " + std::to_string(s) + " out of range");
    }
    for (int k = 0; k < samples_per_frame; ++k, ++i) {
      if (s == kSilence) continue;
      x[i] = kToneAmplitude * std::sin(phase);
      phase = std::fmod(phase + 2.0 * std::numbers::pi * tones[static_cast<size_t>(s)] / sample_rate,
                        2.0 * std::numbers::pi);
    }
  }
  return Waveform(std::move(x), sample_rate);
}

VideoClip render_tone_video(const ToneSequence& symbols, int num_tones, int frame_size, int frame_rate) {
  std::vector<Frame> frames;
  frames.reserve(symbols.size());
  for (int s : symbols) frames.push_back(render_tone_frame(s, num_tones, frame_size));
  return VideoClip(std::move(frames), frame_rate);
}

std::string tone_transcript(const ToneSequence& symbols) {
  std::string out;
  for (int s : symbols) {
    if (s == kSilence) continue;
    if (!out.empty()) out += ' ';
    out += std::to_string(s);
  }
  return out;
}

int decode_tone_frame(const Frame& frame, int num_tones) {
  const Eigen::VectorXf rows = frame.rowwise().mean();
  double weight = 0.0, moment = 0.0;
  for (Eigen::Index r = 0; r < rows.size(); ++r) {
    if (rows[r] > 0.5f) {
      weight += rows[r];
      moment += rows[r] * (r + 0.5);
    }
  }
  if (weight == 0.0) return kSilence;
  const double center = moment / weight;
  int best = 0;
  double best_dist = INFINITY;
  for (int i = 0; i < num_tones; ++i) {
    const auto [first, last] = bar_rows(i, num_tones, static_cast<int>(frame.rows()));
    const double d = std::abs(center - 0.5 * (first + last));
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

ToneSequence synthetic_symbols(const SyntheticSpec& spec, int index) {
  Rng rng(spec.seed, kSymbolStream + static_cast<std::uint64_t>(index));
  const int k = static_cast<int>(spec.tones.size());
  ToneSequence symbols(static_cast<size_t>(spec.frames_per_clip));
  for (int& s : symbols) {
    const bool silent = spec.silence_prob > 0.0 && rng.bernoulli(spec.silence_prob);
    s = silent ? kSilence : static_cast<int>(rng.uniform_int(0, k - 1));
  }
  return symbols;
}

SplitCounts split_counts(int num_clips) {
  const int held_out = num_clips * 5 / 100;
  return {num_clips - 2 * held_out, held_out, held_out};
}

std::string make_synthetic_corpus(const SyntheticSpec& spec, const std::string& out_dir) {
  spec.validate();
  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root / "video", ec);
  fs::create_directories(root / "audio", ec);
  fs::create_directories(root / "transcripts", ec);
  if (ec || !fs::is_directory(root / "video")) throw IoError("cannot create corpus directory " + out_dir);

  const int spf = samples_per_frame(spec.sample_rate, spec.frame_rate);
  const int num_tones = static_cast<int>(spec.tones.size());
  const SplitCounts counts = split_counts(spec.num_clips);
  std::vector<ManifestRecord> records;
  for (int i = 0; i < spec.num_clips; ++i) {
    const ToneSequence symbols = synthetic_symbols(spec, i);
    ManifestRecord r;
    r.id = clip_id(i);
    r.video_path = "video/" + r.id + ".v2sf";
    r.audio_path = "audio/" + r.id + ".wav";
    r.transcript = tone_transcript(symbols);
    r.speaker_id = "synthetic";
    r.split = i < counts.train ? Split::kTrain : (i < counts.train + counts.val ? Split::kVal : Split::kTest);
    save_video(render_tone_video(symbols, num_tones, spec.frame_size, spec.frame_rate), (root / r.video_path).string());
    save_audio(render_tone_audio(symbols, spec.tones, spf, spec.sample_rate), (root / r.audio_path).string());
    write_text(root / "transcripts" / (r.id + ".txt"), r.transcript + "\n");
    records.push_back(std::move(r));
  }

  const nlohmann::json meta = {{"num_clips", spec.num_clips},     {"frames_per_clip", spec.frames_per_clip},
                               {"tones", spec.tones},             {"seed", spec.seed},
                               {"silence_prob", spec.silence_prob}, {"frame_size", spec.frame_size},
                               {"sample_rate", spec.sample_rate}, {"frame_rate", spec.frame_rate}};
  write_text(root / kMetadataFile, meta.dump(2) + "\n");
  const fs::path manifest = root / "manifest.jsonl";
  save_manifest(records, manifest.string());
  return manifest.string();
}

std::vector<double> load_synthetic_tones(const std::string& manifest_path) {
  const fs::path meta_path = fs::path(manifest_path).parent_path() / kMetadataFile;
  std::ifstream in(meta_path);
  if (!in) throw IoError("no synthetic corpus metadata at " + meta_path.string());
  try {
    return nlohmann::json::parse(in).at("tones").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(meta_path.string() + ": " + e.what());
  }
}

}  // namespace v2s::data
