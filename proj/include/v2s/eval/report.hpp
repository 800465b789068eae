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

#ifndef V2S_EVAL_REPORT_HPP_
#define V2S_EVAL_REPORT_HPP_

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "v2s/data/manifest.hpp"

namespace v2s::eval {

enum class Metric { kStoi, kMcd, kWer, kPesq };

std::string metric_name(Metric m);
/// Parses a comma-separated list such as "stoi,mcd,wer". Throws ConfigError
/// naming an unknown metric.
std::set<Metric> parse_metrics(const std::string& list);

struct UtteranceScores {
  std::string id;
  bool missing = false;
  std::optional<double> stoi;
  std::optional<double> mcd;
  std::optional<double> wer;
  std::optional<double> pesq;
  /// Tool failures and other per-utterance notes.
  std::string diagnostic;
};

/// Per-utterance scores and the arithmetic means of the values present.
struct EvalReport {
  std::set<Metric> metrics;
  std::vector<UtteranceScores> rows;

  int missing_count() const;
  std::optional<double> mean(Metric m) const;

  /// One row per utterance and a final "mean" row; only requested columns.
  std::string to_csv() const;
  std::string to_json() const;
  void save(const std::string& csv_path, const std::string& json_path) const;
};

struct EvalOptions {
  std::set<Metric> metrics = {Metric::kStoi, Metric::kMcd, Metric::kWer};
  std::string pesq_command;
  std::string asr_command;
  /// Tones of a synthetic corpus; enables the oracle recognizer when no
  /// ASR command is given.
  std::vector<double> oracle_tones;
  int workers = 1;
};

/// Scores hyp_dir/<id>.wav against each record's reference audio and
/// transcript, pairing by manifest id. Absent hypotheses are marked missing.
/// Throws ConfigError when WER is requested without any recognizer.
EvalReport evaluate(const std::vector<data::ManifestRecord>& records, const std::string& hyp_dir,
                    const EvalOptions& options);

}  // namespace v2s::eval

#endif  // V2S_EVAL_REPORT_HPP_
