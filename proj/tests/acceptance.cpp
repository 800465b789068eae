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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any selected criterion fails.
//
//   acceptance --fast   criteria 1-6 and 9 (minutes)
//   acceptance --long   criteria 7 and 8 (two 2000-step trainings; hours on one core)

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "v2s/core/process.hpp"
#include "v2s/data/manifest.hpp"
#include "v2s/data/media.hpp"
#include "v2s/data/synthetic.hpp"
#include "v2s/dsp/mel.hpp"
#include "v2s/dsp/overlap_add.hpp"
#include "v2s/dsp/stft.hpp"
#include "v2s/eval/ablation.hpp"
#include "v2s/eval/metrics.hpp"
#include "v2s/eval/probe.hpp"
#include "v2s/losses/losses.hpp"
#include "v2s/model/generator.hpp"
#include "v2s/nn/tensor.hpp"
#include "v2s/training/checkpoint.hpp"
#include "v2s/training/trainer.hpp"

namespace fs = std::filesystem;
using namespace v2s;

namespace {

// Tolerances and sizes, fixed here so every run checks the same thing.
constexpr double kGpTol = 1e-12;
constexpr double kPowerScaleTol = 1e-4;
constexpr double kDspOracleTol = 1e-5;
constexpr int kDspInputs = 5;
constexpr double kProbeTol = 1e-6;
constexpr double kStoiSelfTol = 1e-9;
constexpr double kMcdClosedFormTol = 1e-9;
constexpr int kMaxWerWords = 6;
constexpr double kOverfitWidth = 0.25;
constexpr int kOverfitClips = 16;
constexpr int kOverfitSteps = 2000;
constexpr int kOverfitBatch = 4;
constexpr double kMaxOverfitMcd = 15.0;
constexpr double kMaxOverfitWer = 0.20;
constexpr double kMaxSilentRatio = 0.1;
constexpr double kProbeSeconds = 5.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Criterion {
 public:
  explicit Criterion(Outcome& out) : out_(out) {}
  void check(bool ok, const std::string& what) {
    if (!ok) {
      out_.pass = false;
      out_.detail += (out_.detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { out_.detail += (out_.detail.empty() ? "" : "; ") + what; }

 private:
  Outcome& out_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Eigen::VectorXd uniform_vector(Eigen::Index n, std::mt19937_64& gen, double amp) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

// D(x) = scale * <u, x> with a unit vector u.
class LinearCritic final : public losses::Critic {
 public:
  LinearCritic(Eigen::VectorXd u, double scale) : u_(std::move(u)), scale_(scale) {}
  Eigen::VectorXd scores(const Eigen::MatrixXd& x) override { return scale_ * (u_.transpose() * x).transpose(); }
  Eigen::MatrixXd backward(const Eigen::VectorXd& w, bool) override { return scale_ * u_ * w.transpose(); }
  Eigen::VectorXd tangent(const Eigen::MatrixXd& v) override { return scale_ * (u_.transpose() * v).transpose(); }

 private:
  Eigen::VectorXd u_;
  double scale_;
};

Outcome loss_identities() {
  Outcome o;
  Criterion c(o);
  std::mt19937_64 gen(1);
  const Eigen::Index dim = 64, batch = 8;
  const Eigen::VectorXd u = oracle::random_vector(dim, gen).normalized();
  const Eigen::MatrixXd real = oracle::random_vector(dim * batch, gen).reshaped(dim, batch);
  const Eigen::MatrixXd fake = oracle::random_vector(dim * batch, gen).reshaped(dim, batch);
  const double lambda = 10.0;
  for (const auto& [scale, expected] : {std::pair{1.0, 0.0}, {0.0, lambda}, {2.0, lambda}}) {
    LinearCritic critic(u, scale);
    Rng rng(2);
    const double gp = losses::gradient_penalty(critic, real, fake, rng, lambda);
    c.check(std::abs(gp - expected) <= kGpTol, "gradient penalty for slope " + fmt("%g", scale) + " = " + fmt("%.17g", gp));
  }
  const Eigen::VectorXd x = uniform_vector(16000, gen, 0.3);
  const double pl = losses::power_loss(Waveform(x), Waveform(Eigen::VectorXd(std::exp(1.0) * x)));
  c.check(std::abs(pl - 2.0) <= kPowerScaleTol, "power_loss(x, e*x) = " + fmt("%.9f", pl));
  const double total = losses::total_generator_loss(LossWeights{}, losses::GeneratorLossParts{1.0, 1.0, 1.0, 1.0});
  c.check(total == 191.4, "total loss with unit parts = " + fmt("%.17g", total));
  c.note("GP 0/10/10, power_loss(x, e*x) " + fmt("%.9f", pl) + ", total " + fmt("%.17g", total));
  return o;
}

Outcome dsp_oracles() {
  Outcome o;
  Criterion c(o);
  std::mt19937_64 gen(3);
  double worst = 0.0;
  for (int i = 0; i < kDspInputs; ++i) {
    const Eigen::VectorXd x = uniform_vector(16000, gen, 0.5);
    const Eigen::MatrixXd mag = dsp::stft_magnitude(Waveform(x));
    const double e_mag = (mag - oracle::naive_power(x).cwiseSqrt()).cwiseAbs().maxCoeff();
    const double e_mel = (dsp::mel_spectrogram(Waveform(x)) - oracle::naive_log_mel(x)).cwiseAbs().maxCoeff();
    const double e_mfcc = (dsp::mfcc(Waveform(x)) - oracle::naive_mfcc(x)).cwiseAbs().maxCoeff();
    worst = std::max({worst, e_mag, e_mel, e_mfcc});
    c.check(e_mag < kDspOracleTol, "stft_magnitude input " + std::to_string(i) + " err " + fmt("%.3g", e_mag));
    c.check(e_mel < kDspOracleTol, "mel_spectrogram input " + std::to_string(i) + " err " + fmt("%.3g", e_mel));
    c.check(e_mfcc < kDspOracleTol, "mfcc input " + std::to_string(i) + " err " + fmt("%.3g", e_mfcc));
  }
  c.note(std::to_string(kDspInputs) + " one-second inputs, max abs error " + fmt("%.3g", worst));
  return o;
}

Outcome overlap_add_contract() {
  Outcome o;
  Criterion c(o);
  const int spf = samples_per_frame(kDefaultSampleRate, kDefaultFrameRate);
  for (int t = 1; t <= 10; ++t) {
    const Eigen::MatrixXd seg = Eigen::MatrixXd::Constant(2 * spf, t, 0.3125);
    const Eigen::VectorXd out = dsp::overlap_add(seg);
    c.check(out.size() == static_cast<Eigen::Index>(t) * spf, "length for T=" + std::to_string(t));
    c.check((out.array() == 0.3125).all(), "constant reconstruction for T=" + std::to_string(t));
  }
  c.note("T = 1..10");
  return o;
}

VideoClip random_clip(int frames, int size, Rng& rng) {
  std::vector<Frame> fs;
  for (int t = 0; t < frames; ++t) {
    Frame f(size, size);
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = static_cast<float>(rng.uniform());
    fs.push_back(std::move(f));
  }
  return VideoClip(std::move(fs));
}

Outcome architecture_contracts() {
  Outcome o;
  Criterion c(o);
  {
    model::GeneratorConfig gc;
    gc.width_scale = kOverfitWidth;
    Rng rng(4);
    model::Generator<float> g(gc, rng);
    const Waveform w = model::generate(g, random_clip(75, gc.frame_height, rng), kDefaultSampleRate);
    c.check(w.size() == 48000, "75 frames gave " + std::to_string(w.size()) + " samples");
    c.check(w.samples().cwiseAbs().maxCoeff() <= 1.0, "samples outside [-1, 1]");
  }
  model::GeneratorConfig gc;
  gc.width_scale = 0.125;
  gc.frame_height = gc.frame_width = 32;
  Rng rng(5);
  model::Generator<double> g(gc, rng);
  const int frames = 12, probe = 6;
  const VideoClip clip = random_clip(frames, 32, rng);
  std::vector<Frame> perturbed = clip.frames();
  perturbed[probe] = (perturbed[probe].array() * 0.1f + 0.45f).matrix();
  const Eigen::MatrixXd base = model::encode_frames(g, clip).features;
  const Eigen::MatrixXd moved = model::encode_frames(g, VideoClip(perturbed)).features;
  int inside = 0;
  for (int t = 0; t < frames; ++t) {
    const double d = (moved.row(t) - base.row(t)).cwiseAbs().maxCoeff();
    if (std::abs(t - probe) <= 2) {
      ++inside;
      c.check(d > kProbeTol, "frame " + std::to_string(t) + " insensitive to frame " + std::to_string(probe));
    } else {
      c.check(d < kProbeTol, "frame " + std::to_string(t) + " sees frame " + std::to_string(probe));
    }
  }
  c.note("48000 samples in [-1,1]; receptive field " + std::to_string(inside) + " frames");
  return o;
}

struct TinyRun {
  TrainConfig config;
  std::string manifest;
};

TrainConfig schedule_config() {
  TrainConfig c;
  c.model_width_scale = kOverfitWidth;
  c.batch_size = kOverfitBatch;
  c.total_gen_steps = 10;
  c.seed = 21;
  return c;
}

Outcome schedule_and_isolation(const std::string& manifest, const std::string& work) {
  Outcome o;
  Criterion c(o);
  const TrainConfig config = schedule_config();
  int critic_rows = 0, gen_rows = 0, since_gen = 0;
  bool interleaved = true;
  training::TrainOptions options;
  options.out_dir = work + "/schedule";
  options.on_step = [&](const training::StepMetrics& m) {
    if (m.phase == training::Phase::kCritic) {
      ++critic_rows;
      ++since_gen;
    } else {
      ++gen_rows;
      interleaved &= since_gen == config.critic_steps_per_gen_step;
      since_gen = 0;
    }
  };
  const training::TrainResult r = training::train(config, manifest, options);
  c.check(r.gen_steps == 10 && gen_rows == 10, "generator updates " + std::to_string(gen_rows));
  c.check(r.critic_steps == 60 && critic_rows == 60, "critic updates " + std::to_string(critic_rows));
  c.check(interleaved, "six critic updates before every generator update");

  // The same loop through the step-level API, checking parameter checksums
  // around every update.
  training::TrainState state(config);
  const auto examples = training::load_examples(
      data::filter_split(data::load_manifest(manifest), data::Split::kTrain), config);
  int violations = 0;
  for (int step = 0; step < config.total_gen_steps; ++step) {
    for (int k = 0; k < config.critic_steps_per_gen_step; ++k) {
      const training::Batch batch = training::next_batch(state, examples);
      const Eigen::MatrixXd fake = training::generate_batch(state, batch);
      const auto gen = nn::checksum(state.generator.parameters());
      const auto wave = nn::checksum(state.wave_critic.parameters());
      const auto power = nn::checksum(state.power_critic.parameters());
      training::critic_update(state, batch.audio, fake);
      violations += nn::checksum(state.generator.parameters()) != gen;
      violations += nn::checksum(state.wave_critic.parameters()) == wave;
      violations += nn::checksum(state.power_critic.parameters()) == power;
    }
    const auto gen = nn::checksum(state.generator.parameters());
    const auto wave = nn::checksum(state.wave_critic.parameters());
    const auto power = nn::checksum(state.power_critic.parameters());
    training::generator_update(state, training::next_batch(state, examples));
    violations += nn::checksum(state.generator.parameters()) == gen;
    violations += nn::checksum(state.wave_critic.parameters()) != wave;
    violations += nn::checksum(state.power_critic.parameters()) != power;
  }
  c.check(violations == 0, std::to_string(violations) + " isolation violations");
  c.note("10 generator / 60 critic updates, isolation held over 70 updates");
  return o;
}

// Recursive edit distance over all alignments; exponential, independent of the DP.
int brute_force_edits(const std::vector<std::string>& r, size_t i, const std::vector<std::string>& h, size_t j) {
  if (i == r.size()) return static_cast<int>(h.size() - j);
  if (j == h.size()) return static_cast<int>(r.size() - i);
  if (r[i] == h[j]) return brute_force_edits(r, i + 1, h, j + 1);
  return 1 + std::min({brute_force_edits(r, i + 1, h, j + 1), brute_force_edits(r, i + 1, h, j),
                       brute_force_edits(r, i, h, j + 1)});
}

Outcome metric_correctness() {
  Outcome o;
  Criterion c(o);
  std::mt19937_64 gen(6);
  Eigen::VectorXd x(32000);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i) / 16000.0;
    x[i] = (0.6 + 0.4 * std::sin(2 * oracle::kPi * 3 * t)) *
           (0.3 * std::sin(2 * oracle::kPi * 220 * t) + 0.2 * std::sin(2 * oracle::kPi * 1300 * t));
  }
  const double s = eval::stoi(Waveform(x), Waveform(x));
  c.check(std::abs(s - 1.0) <= kStoiSelfTol, "stoi(x, x) = " + fmt("%.17g", s));

  const Eigen::MatrixXd a = oracle::random_vector(25 * 50, gen).reshaped(25, 50);
  Eigen::MatrixXd b = a;
  b.row(1).array() += 0.5;
  const double mcd = eval::mcd_from_mfcc(a, b);
  const double expected = 10.0 / std::log(10.0) * std::sqrt(2.0) * 0.5;
  c.check(std::abs(mcd - expected) <= kMcdClosedFormTol, "c1 offset MCD " + fmt("%.17g", mcd));

  // Every pair over a two-word vocabulary with up to six words per side.
  std::vector<std::vector<std::string>> sequences{{}};
  for (size_t start = 0; start < sequences.size(); ++start) {
    if (sequences[start].size() == kMaxWerWords) continue;
    for (const char* w : {"a", "b"}) {
      auto next = sequences[start];
      next.push_back(w);
      sequences.push_back(std::move(next));
    }
  }
  int pairs = 0, mismatches = 0;
  for (const auto& ref : sequences) {
    if (ref.empty()) continue;
    for (const auto& hyp : sequences) {
      const auto e = eval::word_errors(ref, hyp);
      mismatches += e.substitutions + e.deletions + e.insertions != brute_force_edits(ref, 0, hyp, 0);
      ++pairs;
    }
  }
  c.check(mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(pairs) + " pairs disagree");
  const double one_sub =
      eval::wer(eval::split_words("bin blue at f two now"), eval::split_words("bin blue at f two soon"));
  c.check(one_sub == 1.0 / 6.0, "one substitution in six = " + fmt("%.17g", one_sub));
  const double empty = eval::wer(eval::split_words("bin blue at f two now"), {});
  c.check(empty == 1.0, "empty hypothesis = " + fmt("%.17g", empty));
  c.note("stoi(x,x) " + fmt("%.12f", s) + ", " + std::to_string(pairs) + " WER pairs, 1/6 -> " + fmt("%.4f", one_sub));
  return o;
}

Outcome determinism(const std::string& manifest, const std::string& work) {
  Outcome o;
  Criterion c(o);
  auto read = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  training::TrainOptions options;
  options.out_dir = work + "/repeat";
  const auto r = training::train(schedule_config(), manifest, options);
  const std::string first = read(work + "/schedule/metrics.csv");
  const std::string second = read(r.metrics_path);
  c.check(!first.empty() && first == second, "metrics CSVs differ");
  c.note(std::to_string(std::count(first.begin(), first.end(), '\n')) + " metrics lines identical");
  return o;
}

struct OverfitResults {
  double full_mcd = NAN, full_wer = NAN, ablated_wer = NAN;
  std::string checkpoint;
  std::string hyp_dir;
};

OverfitResults run_overfit(const std::string& work, const std::string& manifest) {
  TrainConfig config;
  config.model_width_scale = kOverfitWidth;
  config.batch_size = kOverfitBatch;
  config.total_gen_steps = kOverfitSteps;
  config.checkpoint_every = 250;
  config.seed = 5;
  eval::AblationOptions options;
  options.out_dir = work + "/overfit";
  options.eval_split = data::Split::kTrain;
  options.eval.metrics = {eval::Metric::kMcd, eval::Metric::kWer};
  options.eval.oracle_tones = data::load_synthetic_tones(manifest);
  const auto rows = eval::run_ablation(config, manifest, eval::parse_ablation_grid("l1"), options);
  OverfitResults r;
  r.full_mcd = *rows[0].report.mean(eval::Metric::kMcd);
  r.full_wer = *rows[0].report.mean(eval::Metric::kWer);
  r.ablated_wer = *rows[1].report.mean(eval::Metric::kWer);
  r.checkpoint = options.out_dir + "/full/checkpoint";
  r.hyp_dir = options.out_dir + "/full/hyp";
  return r;
}

Outcome overfit_criterion(const OverfitResults& r) {
  Outcome o;
  Criterion c(o);
  c.check(r.full_mcd < kMaxOverfitMcd, "train MCD " + fmt("%.3f", r.full_mcd) + " >= " + fmt("%g", kMaxOverfitMcd));
  c.check(r.full_wer < kMaxOverfitWer, "train WER " + fmt("%.4f", r.full_wer) + " >= " + fmt("%g", kMaxOverfitWer));
  c.check(r.ablated_wer >= r.full_wer, "WER without L1 losses " + fmt("%.4f", r.ablated_wer) + " below full model");
  c.note("full model MCD " + fmt("%.3f", r.full_mcd) + " WER " + fmt("%.4f", r.full_wer) + "; without L1 WER " +
         fmt("%.4f", r.ablated_wer));
  return o;
}

Outcome silent_probe_criterion(const OverfitResults& r, const std::string& manifest) {
  Outcome o;
  Criterion c(o);
  const eval::SilentProbeReport probe = eval::silent_probe(r.checkpoint, kProbeSeconds);
  c.check(probe.audio.size() == static_cast<Eigen::Index>(kProbeSeconds * kDefaultSampleRate), "probe length");
  const int spf = samples_per_frame(kDefaultSampleRate, kDefaultFrameRate);
  const auto tones = data::load_synthetic_tones(manifest);
  double energy = 0.0;
  Eigen::Index samples = 0;
  for (const auto& rec : data::filter_split(data::load_manifest(manifest), data::Split::kTrain)) {
    const VideoClip clip = data::load_video(rec.video_path);
    const Waveform hyp = data::load_audio(r.hyp_dir + "/" + rec.id + ".wav");
    for (int t = 0; t < clip.num_frames(); ++t) {
      if (data::decode_tone_frame(clip.frame(t), static_cast<int>(tones.size())) == data::kSilence) continue;
      energy += hyp.samples().segment(static_cast<Eigen::Index>(t) * spf, spf).squaredNorm();
      samples += spf;
    }
  }
  const double voiced = samples ? std::sqrt(energy / static_cast<double>(samples)) : 0.0;
  c.check(voiced > 0.0, "no voiced output");
  c.check(probe.rms < kMaxSilentRatio * voiced,
          "silent RMS " + fmt("%.6f", probe.rms) + " >= " + fmt("%g", kMaxSilentRatio) + " x voiced RMS " +
              fmt("%.6f", voiced));
  c.note("silent RMS " + fmt("%.6f", probe.rms) + ", voiced RMS " + fmt("%.6f", voiced) + ", ratio " +
         fmt("%.4f", voiced > 0.0 ? probe.rms / voiced : NAN));
  return o;
}

void report(int number, const std::string& name, const std::function<Outcome()>& run, int& failures) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("error: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion %d %-28s %s (%.1f s) %s\n", number, name.c_str(), o.pass ? "PASS" : "FAIL", s,
              o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  bool fast = false, slow = false;
  std::string work_dir;
  app.add_flag("--fast", fast, "Criteria 1-6 and 9");
  app.add_flag("--long", slow, "Criteria 7 and 8");
  app.add_option("--work-dir", work_dir, "Keep run artifacts here instead of a temporary directory");
  CLI11_PARSE(app, argc, argv);
  if (!fast && !slow) fast = slow = true;

  std::optional<TempDir> tmp;
  if (work_dir.empty()) {
    tmp.emplace("v2s-acceptance");
    work_dir = tmp->path();
  }
  fs::create_directories(work_dir);

  int failures = 0;
  if (fast) {
    data::SyntheticSpec spec;
    spec.num_clips = 4;
    spec.silence_prob = 0.2;
    const std::string manifest = data::make_synthetic_corpus(spec, work_dir + "/small_corpus");
    report(1, "loss identities", loss_identities, failures);
    report(2, "dsp oracle equivalence", dsp_oracles, failures);
    report(3, "overlap-add", overlap_add_contract, failures);
    report(4, "architecture contracts", architecture_contracts, failures);
    report(5, "schedule and isolation", [&] { return schedule_and_isolation(manifest, work_dir); }, failures);
    report(6, "metric correctness", metric_correctness, failures);
    report(9, "determinism", [&] { return determinism(manifest, work_dir); }, failures);
  }
  if (slow) {
    data::SyntheticSpec spec;
    spec.num_clips = kOverfitClips;
    spec.silence_prob = 0.2;
    spec.seed = 11;
    const std::string manifest = data::make_synthetic_corpus(spec, work_dir + "/overfit_corpus");
    OverfitResults results;
    report(7, "overfit experiment", [&] {
      results = run_overfit(work_dir, manifest);
      return overfit_criterion(results);
    }, failures);
    report(8, "silent probe", [&] {
      if (results.checkpoint.empty()) throw std::runtime_error("overfit run did not complete");
      return silent_probe_criterion(results, manifest);
    }, failures);
  }
  return failures == 0 ? 0 : 1;
}
