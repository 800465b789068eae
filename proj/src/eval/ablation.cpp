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

#include "v2s/eval/ablation.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "v2s/core/error.hpp"
#include "v2s/data/media.hpp"
#include "v2s/training/trainer.hpp"

namespace v2s::eval {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string>& toggle_names() {
  static const std::vector<std::string> names = {"pase", "power", "mfcc", "wave_critic", "power_critic"};
  return names;
}

bool* toggle(TrainConfig& c, const std::string& name) {
  if (name == "pase") return &c.enable_pase_loss;
  if (name == "power") return &c.enable_power_loss;
  if (name == "mfcc") return &c.enable_mfcc_loss;
  if (name == "wave_critic") return &c.enable_wave_critic;
  if (name == "power_critic") return &c.enable_power_critic;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

std::vector<AblationVariant> parse_ablation_grid(const std::string& grid) {
  std::vector<AblationVariant> out{{"full", {}}};
  std::stringstream entries(grid);
  for (std::string entry; std::getline(entries, entry, ',');) {
    entry = trim(entry);
    if (entry.empty() || entry == "full") continue;
    AblationVariant v{"no_" + entry, {}};
    std::stringstream parts(entry);
    for (std::string name; std::getline(parts, name, '+');) {
      name = trim(name);
      if (name == "l1") {
        v.removed.insert(v.removed.end(), {"pase", "power", "mfcc"});
      } else if (std::find(toggle_names().begin(), toggle_names().end(), name) != toggle_names().end()) {
        v.removed.push_back(name);
      } else {
        throw ConfigError("unknown ablation component \"" + name +
                          "\" (expected pase, power, mfcc, wave_critic, power_critic or l1)");
      }
    }
    bool duplicate = false;
    for (const auto& existing : out) duplicate |= existing.label == v.label;
    if (!duplicate) out.push_back(std::move(v));
  }
  return out;
}

TrainConfig apply_variant(const TrainConfig& base, const AblationVariant& variant) {
  TrainConfig c = base;
  for (const auto& name : variant.removed) {
    bool* flag = toggle(c, name);
    if (!flag) throw ConfigError("unknown ablation component \"" + name + "\"");
    *flag = false;
  }
  return c;
}

void synthesize_records(training::LoadedGenerator& generator, const std::vector<data::ManifestRecord>& records,
                        const std::string& hyp_dir) {
  std::error_code ec;
  fs::create_directories(hyp_dir, ec);
  if (!fs::is_directory(hyp_dir)) throw IoError("cannot create " + hyp_dir);
  for (const auto& rec : records) {
    const VideoClip clip = data::load_video(rec.video_path);
    const Waveform audio = training::synthesize(*generator.generator, generator.config, clip);
    data::save_audio(audio, (fs::path(hyp_dir) / (rec.id + ".wav")).string());
  }
}

std::vector<AblationRow> run_ablation(const TrainConfig& base, const std::string& manifest_path,
                                      const std::vector<AblationVariant>& variants,
                                      const AblationOptions& options) {
  if (options.out_dir.empty()) throw ConfigError("ablation needs an output directory");
  const auto records = data::filter_split(data::load_manifest(manifest_path), options.eval_split);
  if (records.empty()) {
    throw ConfigError("manifest has no " + std::string(data::split_name(options.eval_split)) + " records to evaluate");
  }
  std::vector<AblationRow> rows;
  for (const auto& variant : variants) {
    const TrainConfig config = apply_variant(base, variant);
    const fs::path dir = fs::path(options.out_dir) / variant.label;
    training::TrainOptions train_options;
    train_options.out_dir = dir.string();
    const training::TrainResult result = training::train(config, manifest_path, train_options);
    training::LoadedGenerator generator = training::load_generator(result.checkpoint_dir);
    const std::string hyp_dir = (dir / "hyp").string();
    synthesize_records(generator, records, hyp_dir);
    EvalReport report = evaluate(records, hyp_dir, options.eval);
    report.save((dir / "report.csv").string(), (dir / "report.json").string());
    rows.push_back({variant, std::move(report)});
    const std::string csv = ablation_csv(rows);
    data::write_file((fs::path(options.out_dir) / "ablation.csv").string(),
                     std::vector<std::uint8_t>(csv.begin(), csv.end()));
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "variant,removed";
  const std::set<Metric> metrics = rows.empty() ? std::set<Metric>{} : rows.front().report.metrics;
  for (Metric m : metrics) os << ',' << metric_name(m);
  os << ",missing\n";
  for (const auto& row : rows) {
    os << row.variant.label << ',';
    for (size_t i = 0; i < row.variant.removed.size(); ++i) os << (i ? "+" : "") << row.variant.removed[i];
    for (Metric m : metrics) {
      os << ',';
      if (const auto v = row.report.mean(m)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.6f", *v);
        os << buf;
      }
    }
    os << ',' << row.report.missing_count() << '\n';
  }
  return os.str();
}

}  // namespace v2s::eval
