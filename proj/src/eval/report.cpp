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

#include "v2s/eval/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "v2s/core/error.hpp"
#include "v2s/core/parallel.hpp"
#include "v2s/data/media.hpp"
#include "v2s/eval/adapters.hpp"
#include "v2s/eval/metrics.hpp"

namespace v2s::eval {

namespace fs = std::filesystem;

namespace {

std::optional<double> UtteranceScores::*field(Metric m) {
  switch (m) {
    case Metric::kStoi:
      return &UtteranceScores::stoi;
    case Metric::kMcd:
      return &UtteranceScores::mcd;
    case Metric::kWer:
      return &UtteranceScores::wer;
    case Metric::kPesq:
      return &UtteranceScores::pesq;
  }
  return &UtteranceScores::stoi;
}

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void note(UtteranceScores& s, const std::string& what) {
  if (!s.diagnostic.empty()) s.diagnostic += "; ";
  s.diagnostic += what;
}

void write_text(const std::string& path, const std::string& text) {
  data::write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::kStoi:
      return "stoi";
    case Metric::kMcd:
      return "mcd";
    case Metric::kWer:
      return "wer";
    case Metric::kPesq:
      return "pesq";
  }
  return "";
}

std::set<Metric> parse_metrics(const std::string& list) {
  std::set<Metric> out;
  std::stringstream ss(list);
  for (std::string name; std::getline(ss, name, ',');) {
    if (name == "stoi") {
      out.insert(Metric::kStoi);
    } else if (name == "mcd") {
      out.insert(Metric::kMcd);
    } else if (name == "wer") {
      out.insert(Metric::kWer);
    } else if (name == "pesq") {
      out.insert(Metric::kPesq);
    } else {
      throw ConfigError("unknown metric \"" + name + "\" (expected stoi, mcd, wer or pesq)");
    }
  }
  if (out.empty()) throw ConfigError("no metrics requested");
  return out;
}

int EvalReport::missing_count() const {
  int n = 0;
  for (const auto& r : rows) n += r.missing;
  return n;
}

std::optional<double> EvalReport::mean(Metric m) const {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (const auto& v = r.*field(m)) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os << "id";
  for (Metric m : metrics) os << ',' << metric_name(m);
  os << ",status\n";
  for (const auto& r : rows) {
    os << r.id;
    for (Metric m : metrics) {
      os << ',';
      if (const auto& v = r.*field(m)) os << format(*v);
    }
    os << ',' << (r.missing ? "missing" : "ok") << '\n';
  }
  os << "mean";
  for (Metric m : metrics) {
    os << ',';
    if (const auto v = mean(m)) os << format(*v);
  }
  os << ",missing=" << missing_count() << '\n';
  return os.str();
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["num_utterances"] = rows.size();
  j["missing_count"] = missing_count();
  nlohmann::ordered_json means = nlohmann::ordered_json::object();
  for (Metric m : metrics) {
    const auto v = mean(m);
    means[metric_name(m)] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  }
  j["means"] = means;
  nlohmann::ordered_json utts = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json u;
    u["id"] = r.id;
    u["missing"] = r.missing;
    for (Metric m : metrics) {
      const auto& v = r.*field(m);
      u[metric_name(m)] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    }
    if (!r.diagnostic.empty()) u["diagnostic"] = r.diagnostic;
    utts.push_back(u);
  }
  j["utterances"] = utts;
  return j.dump(2) + "\n";
}

void EvalReport::save(const std::string& csv_path, const std::string& json_path) const {
  write_text(csv_path, to_csv());
  write_text(json_path, to_json());
}

EvalReport evaluate(const std::vector<data::ManifestRecord>& records, const std::string& hyp_dir,
                    const EvalOptions& options) {
  const bool want_wer = options.metrics.count(Metric::kWer) > 0;
  std::optional<OracleAsr> oracle;
  if (want_wer && options.asr_command.empty()) {
    if (options.oracle_tones.empty()) {
      throw ConfigError("wer requires an ASR command or a synthetic corpus for the oracle recognizer");
    }
    oracle.emplace(options.oracle_tones, samples_per_frame(kDefaultSampleRate, kDefaultFrameRate));
  }
  EvalReport report;
  report.metrics = options.metrics;
  report.rows.resize(records.size());
  parallel_for(records.size(), options.workers, [&](size_t i) {
    const data::ManifestRecord& rec = records[i];
    UtteranceScores& s = report.rows[i];
    s.id = rec.id;
    const std::string hyp_path = (fs::path(hyp_dir) / (rec.id + ".wav")).string();
    if (!fs::is_regular_file(hyp_path)) {
      s.missing = true;
      note(s, "no hypothesis at " + hyp_path);
      return;
    }
    Waveform ref = data::load_audio(rec.audio_path);
    Waveform hyp = data::load_audio(hyp_path);
    if (ref.size() != hyp.size()) {
      note(s, "lengths differ (" + std::to_string(ref.size()) + " vs " + std::to_string(hyp.size()) +
                  "); scored on the common prefix");
      const Eigen::Index n = std::min(ref.size(), hyp.size());
      ref = Waveform(ref.samples().head(n), ref.sample_rate());
      hyp = Waveform(hyp.samples().head(n), hyp.sample_rate());
    }
    if (options.metrics.count(Metric::kStoi)) {
      try {
        s.stoi = stoi(ref, hyp);
      } catch (const Error& e) {
        note(s, e.what());
      }
    }
    if (options.metrics.count(Metric::kMcd)) {
      try {
        s.mcd = mcd(ref, hyp);
      } catch (const Error& e) {
        note(s, e.what());
      }
    }
    if (want_wer) {
      const auto reference = split_words(rec.transcript);
      std::optional<std::vector<std::string>> words;
      if (oracle) {
        words = oracle->transcribe(hyp);
      } else {
        auto r = asr_adapter(options.asr_command, hyp_path);
        if (!r.diagnostic.empty()) note(s, r.diagnostic);
        words = std::move(r.value);
      }
      if (reference.empty()) {
        note(s, "empty reference transcript");
      } else if (words) {
        s.wer = wer(reference, *words);
      }
    }
    if (options.metrics.count(Metric::kPesq)) {
      auto r = pesq_adapter(options.pesq_command, rec.audio_path, hyp_path);
      if (!r.diagnostic.empty()) note(s, r.diagnostic);
      s.pesq = r.value;
    }
  });
  return report;
}

}  // namespace v2s::eval
