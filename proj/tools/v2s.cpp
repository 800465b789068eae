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

// Command-line entry point: corpus synthesis, training, synthesis,
// evaluation, ablation sweeps and the silent probe.
//
// Exit codes: 0 success, 1 user error (bad flags, configs, inputs or files),
// 2 internal or numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "v2s/core/config.hpp"
#include "v2s/core/error.hpp"
#include "v2s/core/parallel.hpp"
#include "v2s/data/manifest.hpp"
#include "v2s/data/media.hpp"
#include "v2s/data/synthetic.hpp"
#include "v2s/eval/ablation.hpp"
#include "v2s/eval/probe.hpp"
#include "v2s/eval/report.hpp"
#include "v2s/training/checkpoint.hpp"
#include "v2s/training/trainer.hpp"

namespace fs = std::filesystem;

namespace {

/// A library error tagged with the flag whose value caused it.
struct FlagError {
  std::string flag;
  std::string message;
  int exit_code;
};

int exit_code_for(const v2s::Error& e) {
  if (dynamic_cast<const v2s::NumericError*>(&e) || dynamic_cast<const v2s::DifferentiationError*>(&e)) return 2;
  return 1;
}

template <typename F>
auto for_flag(const std::string& flag, F&& f) {
  try {
    return f();
  } catch (const v2s::Error& e) {
    // Numerical failures are not attributable to a single flag.
    const int code = exit_code_for(e);
    throw FlagError{code == 1 ? flag : "", e.what(), code};
  }
}

std::vector<double> parse_tones(const std::string& list) {
  std::vector<double> tones;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      size_t used = 0;
      tones.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw v2s::ConfigError("not a frequency: \"" + item + "\"");
    }
  }
  return tones;
}

/// Tones of a synthetic corpus next to the manifest, or none.
std::vector<double> corpus_tones(const std::string& manifest) {
  if (!fs::exists(fs::path(manifest).parent_path() / "synthetic.json")) return {};
  return v2s::data::load_synthetic_tones(manifest);
}

v2s::TrainConfig load_train_config(const std::string& path, const std::optional<std::uint64_t>& seed) {
  v2s::TrainConfig config = for_flag("--config", [&] { return v2s::load_config(path); });
  if (seed) config.seed = *seed;
  return config;
}

std::vector<v2s::data::ManifestRecord> load_records(const std::string& manifest, const std::string& split) {
  auto records = for_flag("--manifest", [&] { return v2s::data::load_manifest(manifest); });
  if (split == "all") return records;
  const auto s = for_flag("--split", [&] { return v2s::data::parse_split(split); });
  return v2s::data::filter_split(records, s);
}

std::string strip_report_extension(const std::string& path) {
  const fs::path p(path);
  if (p.extension() == ".csv" || p.extension() == ".json") return (p.parent_path() / p.stem()).string();
  return path;
}

void print_means(const v2s::eval::EvalReport& report) {
  for (v2s::eval::Metric m : report.metrics) {
    const auto v = report.mean(m);
    std::printf("%s %s\n", v2s::eval::metric_name(m).c_str(), v ? std::to_string(*v).c_str() : "n/a");
  }
  std::printf("utterances %zu missing %d\n", report.rows.size(), report.missing_count());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Video-to-speech synthesis: training, synthesis and evaluation"};
  app.require_subcommand(1);

  // make-synthetic
  auto* mk = app.add_subcommand("make-synthetic", "Write a synthetic tone corpus and its manifest");
  std::string mk_out;
  v2s::data::SyntheticSpec spec;
  std::string mk_tones = "300,500,800,1200";
  mk->add_option("--out", mk_out, "Output directory")->required();
  mk->add_option("--clips", spec.num_clips, "Number of clips")->capture_default_str();
  mk->add_option("--frames", spec.frames_per_clip, "Frames per clip")->capture_default_str();
  mk->add_option("--tones", mk_tones, "Comma-separated tone frequencies in Hz")->capture_default_str();
  mk->add_option("--seed", spec.seed, "Corpus seed")->capture_default_str();
  mk->add_option("--silence-prob", spec.silence_prob, "Probability of a silent frame")->capture_default_str();
  mk->add_option("--frame-size", spec.frame_size, "Frame side in pixels")->capture_default_str();
  mk->callback([&] {
    spec.tones = for_flag("--tones", [&] { return parse_tones(mk_tones); });
    const std::string manifest = for_flag("--out", [&] { return v2s::data::make_synthetic_corpus(spec, mk_out); });
    std::printf("%s\n", manifest.c_str());
  });

  // train
  auto* tr = app.add_subcommand("train", "Train a model");
  std::string tr_config, tr_manifest, tr_out, tr_resume;
  std::optional<std::uint64_t> tr_seed;
  tr->add_option("--config", tr_config, "Training config file")->required();
  tr->add_option("--manifest", tr_manifest, "Dataset manifest (JSONL)")->required();
  tr->add_option("--out-dir", tr_out, "Run directory for metrics and checkpoints")->required();
  tr->add_option("--resume", tr_resume, "Checkpoint directory to continue from");
  tr->add_option("--seed", tr_seed, "Override the config seed");
  tr->callback([&] {
    const v2s::TrainConfig config = load_train_config(tr_config, tr_seed);
    v2s::training::TrainOptions options;
    options.out_dir = tr_out;
    options.resume_from = tr_resume;
    options.on_step = [&](const v2s::training::StepMetrics& m) {
      if (m.phase == v2s::training::Phase::kGenerator && (m.step % 10 == 0 || m.step == config.total_gen_steps)) {
        std::printf("step %lld/%d total %.6g\n", static_cast<long long>(m.step), config.total_gen_steps, m.total);
        std::fflush(stdout);
      }
    };
    const auto result = for_flag(tr_resume.empty() ? "--config" : "--resume",
                                 [&] { return v2s::training::train(config, tr_manifest, options); });
    std::printf("checkpoint %s\nmetrics %s\n", result.checkpoint_dir.c_str(), result.metrics_path.c_str());
  });

  // synth
  auto* sy = app.add_subcommand("synth", "Synthesize speech from video");
  std::string sy_ckpt, sy_video, sy_wav, sy_manifest, sy_split = "test", sy_hyp;
  sy->add_option("--checkpoint", sy_ckpt, "Checkpoint directory")->required();
  auto* sy_video_opt = sy->add_option("--video", sy_video, "Input V2SF video");
  auto* sy_wav_opt = sy->add_option("--out-wav", sy_wav, "Output WAV");
  auto* sy_manifest_opt = sy->add_option("--manifest", sy_manifest, "Synthesize every record of a manifest split");
  sy->add_option("--split", sy_split, "Split for --manifest (train, val, test or all)")->capture_default_str();
  auto* sy_hyp_opt = sy->add_option("--hyp-dir", sy_hyp, "Output directory for --manifest, one <id>.wav each");
  sy_video_opt->needs(sy_wav_opt);
  sy_wav_opt->needs(sy_video_opt);
  sy_manifest_opt->needs(sy_hyp_opt);
  sy_hyp_opt->needs(sy_manifest_opt);
  sy_video_opt->excludes(sy_manifest_opt);
  sy->callback([&] {
    if (sy_video.empty() && sy_manifest.empty()) throw CLI::RequiredError("--video/--out-wav or --manifest/--hyp-dir");
    auto generator = for_flag("--checkpoint", [&] { return v2s::training::load_generator(sy_ckpt); });
    const auto start = std::chrono::steady_clock::now();
    if (!sy_video.empty()) {
      const v2s::VideoClip clip =
          for_flag("--video", [&] { return v2s::data::load_video(sy_video, generator.config.frame_rate); });
      const v2s::Waveform audio = for_flag(
          "--video", [&] { return v2s::training::synthesize(*generator.generator, generator.config, clip); });
      for_flag("--out-wav", [&] { v2s::data::save_audio(audio, sy_wav); });
      std::printf("%s: %lld samples from %d frames\n", sy_wav.c_str(), static_cast<long long>(audio.size()),
                  clip.num_frames());
    } else {
      const auto records = load_records(sy_manifest, sy_split);
      for_flag("--manifest", [&] { v2s::eval::synthesize_records(generator, records, sy_hyp); });
      std::printf("%s: %zu files\n", sy_hyp.c_str(), records.size());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::printf("wall time %.1f ms\n", ms);
  });

  // eval
  auto* ev = app.add_subcommand("eval", "Score synthesized audio against a manifest");
  std::string ev_manifest, ev_hyp, ev_metrics = "stoi,mcd,wer", ev_pesq, ev_asr, ev_report, ev_split = "all";
  ev->add_option("--manifest", ev_manifest, "Dataset manifest (JSONL)")->required();
  ev->add_option("--hyp-dir", ev_hyp, "Directory of <id>.wav hypotheses")->required();
  ev->add_option("--metrics", ev_metrics, "Comma-separated subset of stoi,mcd,wer,pesq")->capture_default_str();
  ev->add_option("--pesq-cmd", ev_pesq, "PESQ command template with {ref} and {deg}");
  ev->add_option("--asr-cmd", ev_asr, "ASR command template with {wav}");
  ev->add_option("--report", ev_report, "Report path stem; writes <stem>.csv and <stem>.json")->required();
  ev->add_option("--split", ev_split, "Records to score (train, val, test or all)")->capture_default_str();
  ev->callback([&] {
    v2s::eval::EvalOptions options;
    options.metrics = for_flag("--metrics", [&] { return v2s::eval::parse_metrics(ev_metrics); });
    options.pesq_command = ev_pesq;
    options.asr_command = ev_asr;
    options.oracle_tones = for_flag("--manifest", [&] { return corpus_tones(ev_manifest); });
    options.workers = v2s::num_workers();
    const auto records = load_records(ev_manifest, ev_split);
    const auto report = for_flag("--asr-cmd", [&] { return v2s::eval::evaluate(records, ev_hyp, options); });
    const std::string stem = strip_report_extension(ev_report);
    for_flag("--report", [&] { report.save(stem + ".csv", stem + ".json"); });
    print_means(report);
  });

  // ablate
  auto* ab = app.add_subcommand("ablate", "Train and evaluate one model per removed component");
  std::string ab_config, ab_manifest, ab_grid, ab_out, ab_split = "test", ab_metrics = "stoi,mcd,wer", ab_pesq,
                                                       ab_asr;
  std::optional<std::uint64_t> ab_seed;
  ab->add_option("--config", ab_config, "Base training config")->required();
  ab->add_option("--manifest", ab_manifest, "Dataset manifest (JSONL)")->required();
  ab->add_option("--grid", ab_grid, "Comma-separated removals, e.g. \"pase,power,mfcc,l1\"")->required();
  ab->add_option("--out-dir", ab_out, "Directory for runs and ablation.csv")->required();
  ab->add_option("--eval-split", ab_split, "Split to evaluate on")->capture_default_str();
  ab->add_option("--metrics", ab_metrics, "Comma-separated subset of stoi,mcd,wer,pesq")->capture_default_str();
  ab->add_option("--pesq-cmd", ab_pesq, "PESQ command template with {ref} and {deg}");
  ab->add_option("--asr-cmd", ab_asr, "ASR command template with {wav}");
  ab->add_option("--seed", ab_seed, "Override the config seed");
  ab->callback([&] {
    const v2s::TrainConfig config = load_train_config(ab_config, ab_seed);
    const auto variants = for_flag("--grid", [&] { return v2s::eval::parse_ablation_grid(ab_grid); });
    v2s::eval::AblationOptions options;
    options.out_dir = ab_out;
    options.eval_split = for_flag("--eval-split", [&] { return v2s::data::parse_split(ab_split); });
    options.eval.metrics = for_flag("--metrics", [&] { return v2s::eval::parse_metrics(ab_metrics); });
    options.eval.pesq_command = ab_pesq;
    options.eval.asr_command = ab_asr;
    options.eval.oracle_tones = for_flag("--manifest", [&] { return corpus_tones(ab_manifest); });
    options.eval.workers = v2s::num_workers();
    const auto rows =
        for_flag("--config", [&] { return v2s::eval::run_ablation(config, ab_manifest, variants, options); });
    std::cout << v2s::eval::ablation_csv(rows);
  });

  // silent-probe
  auto* sp = app.add_subcommand("silent-probe", "Synthesize from a motionless silent mouth");
  std::string sp_ckpt, sp_out;
  double sp_seconds = 5.0;
  sp->add_option("--checkpoint", sp_ckpt, "Checkpoint directory")->required();
  sp->add_option("--seconds", sp_seconds, "Probe length in seconds")->capture_default_str();
  sp->add_option("--out-dir", sp_out, "Output directory")->required();
  sp->callback([&] {
    const auto report = for_flag("--checkpoint", [&] { return v2s::eval::silent_probe(sp_ckpt, sp_seconds); });
    for_flag("--out-dir", [&] { v2s::eval::write_probe_outputs(report, sp_out); });
    std::printf("samples %lld\nrms %.6f\npeak %.6f\n", static_cast<long long>(report.audio.size()), report.rms,
                report.peak);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const FlagError& e) {
    if (e.flag.empty()) {
      std::fprintf(stderr, "error: %s\n", e.message.c_str());
    } else {
      std::fprintf(stderr, "error: %s: %s\n", e.flag.c_str(), e.message.c_str());
    }
    return e.exit_code;
  } catch (const v2s::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 0;
}
