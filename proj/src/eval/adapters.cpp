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

#include "v2s/eval/adapters.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "v2s/core/error.hpp"
#include "v2s/core/process.hpp"
#include "v2s/eval/metrics.hpp"

namespace v2s::eval {

namespace {

std::string failure(const std::string& tool, const CommandResult& r) {
  return tool + " command exited with code " + std::to_string(r.exit_code) + ": " + r.output;
}

}  // namespace

AdapterResult<double> pesq_adapter(const std::string& command_template, const std::string& ref_path,
                                   const std::string& deg_path) {
  AdapterResult<double> out;
  if (command_template.empty()) return out;
  try {
    const CommandResult r = run_command(expand_command(command_template, {{"ref", ref_path}, {"deg", deg_path}}));
    if (r.exit_code != 0) {
      out.diagnostic = failure("pesq", r);
      return out;
    }
    std::istringstream in(r.output);
    for (std::string token; in >> token;) {
      try {
        size_t used = 0;
        const double v = std::stod(token, &used);
        if (used == token.size() && std::isfinite(v)) out.value = v;
      } catch (const std::exception&) {
      }
    }
    if (!out.value) out.diagnostic = "pesq command printed no score: " + r.output;
  } catch (const Error& e) {
    out.diagnostic = e.what();
  }
  return out;
}

AdapterResult<std::vector<std::string>> asr_adapter(const std::string& command_template,
                                                    const std::string& wav_path) {
  AdapterResult<std::vector<std::string>> out;
  if (command_template.empty()) return out;
  try {
    const CommandResult r = run_command(expand_command(command_template, {{"wav", wav_path}}));
    if (r.exit_code != 0) {
      out.diagnostic = failure("asr", r);
      return out;
    }
    out.value = split_words(r.output);
  } catch (const Error& e) {
    out.diagnostic = e.what();
  }
  return out;
}

OracleAsr::OracleAsr(std::vector<double> tones, int samples_per_frame, int sample_rate, double rms_threshold)
    : tones_(std::move(tones)),
      samples_per_frame_(samples_per_frame),
      sample_rate_(sample_rate),
      rms_threshold_(rms_threshold) {
  if (tones_.empty()) throw ConfigError("oracle ASR needs at least one tone");
  if (samples_per_frame_ < 4) throw ConfigError("oracle ASR needs at least 4 samples per frame");
}

int OracleAsr::classify(const Eigen::Ref<const Eigen::VectorXd>& segment) const {
  const Eigen::Index n = segment.size();
  if (n == 0 || std::sqrt(segment.squaredNorm() / static_cast<double>(n)) < rms_threshold_) return -1;
  std::vector<std::complex<double>> twiddle(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) twiddle[static_cast<size_t>(j)] = std::polar(1.0, -2.0 * std::numbers::pi * j / n);
  double best = -1.0;
  Eigen::Index best_bin = 1;
  for (Eigen::Index k = 1; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += segment[i] * twiddle[static_cast<size_t>(k * i % n)];
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      best_bin = k;
    }
  }
  const double hz = static_cast<double>(best_bin) * sample_rate_ / n;
  int nearest = 0;
  for (size_t t = 1; t < tones_.size(); ++t) {
    if (std::abs(tones_[t] - hz) < std::abs(tones_[static_cast<size_t>(nearest)] - hz)) nearest = static_cast<int>(t);
  }
  return nearest;
}

std::vector<std::string> OracleAsr::transcribe(const Waveform& audio) const {
  std::vector<std::string> words;
  for (Eigen::Index s = 0; s + samples_per_frame_ <= audio.size(); s += samples_per_frame_) {
    const int t = classify(audio.samples().segment(s, samples_per_frame_));
    if (t >= 0) words.push_back(std::to_string(t));
  }
  return words;
}

}  // namespace v2s::eval
