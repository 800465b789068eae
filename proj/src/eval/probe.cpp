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

#include "v2s/eval/probe.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "v2s/core/error.hpp"
#include "v2s/data/media.hpp"
#include "v2s/data/synthetic.hpp"
#include "v2s/dsp/stft.hpp"
#include "v2s/eval/diagnostics.hpp"
#include "v2s/training/trainer.hpp"

namespace v2s::eval {

namespace fs = std::filesystem;

double rms(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return x.size() ? std::sqrt(x.squaredNorm() / static_cast<double>(x.size())) : 0.0;
}

SilentProbeReport silent_probe(training::LoadedGenerator& generator, double seconds) {
  const TrainConfig& c = generator.config;
  const auto frames = static_cast<int>(std::lround(seconds * c.frame_rate));
  if (frames < 1) throw ConfigError("silent probe needs at least one frame");
  if (c.frame_height != c.frame_width) throw ConfigError("silent probe needs square frames");
  const Frame still = data::render_tone_frame(data::kSilence, 1, c.frame_height);
  const VideoClip clip(std::vector<Frame>(static_cast<size_t>(frames), still), c.frame_rate);
  Waveform audio = training::synthesize(*generator.generator, c, clip);
  const double r = rms(audio.samples());
  const double peak = audio.size() ? audio.samples().cwiseAbs().maxCoeff() : 0.0;
  return {std::move(audio), r, peak};
}

SilentProbeReport silent_probe(const std::string& checkpoint_dir, double seconds) {
  training::LoadedGenerator g = training::load_generator(checkpoint_dir);
  return silent_probe(g, seconds);
}

void write_probe_outputs(const SilentProbeReport& report, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) throw IoError("cannot create " + out_dir);
  const fs::path root(out_dir);
  data::save_audio(report.audio, (root / "silent.wav").string());
  write_png(waveform_image(report.audio.samples()), (root / "waveform.png").string());
  dsp::StftParams stft;
  stft.sample_rate = report.audio.sample_rate();
  if (report.audio.size() >= stft.window_length()) {
    write_png(intensity_image(dsp::log_power_spectrogram(report.audio.samples(), stft)),
              (root / "spectrogram.png").string());
  }
  char text[128];
  std::snprintf(text, sizeof text, "samples %lld\nrms %.6f\npeak %.6f\n", static_cast<long long>(report.audio.size()),
                report.rms, report.peak);
  const std::string s(text);
  data::write_file((root / "report.txt").string(), std::vector<std::uint8_t>(s.begin(), s.end()));
}

}  // namespace v2s::eval
