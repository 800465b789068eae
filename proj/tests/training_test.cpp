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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "v2s/core/error.hpp"
#include "v2s/core/process.hpp"
#include "v2s/data/media.hpp"
#include "v2s/data/synthetic.hpp"
#include "v2s/training/checkpoint.hpp"
#include "v2s/training/trainer.hpp"

namespace v2s::training {
namespace {

namespace fs = std::filesystem;

constexpr int kFrameSize = 32;

TrainConfig tiny_config() {
  TrainConfig c;
  c.model_width_scale = 0.0625;
  c.frame_height = c.frame_width = kFrameSize;
  c.batch_size = 2;
  c.total_gen_steps = 2;
  c.seed = 3;
  return c;
}

class TrainingTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new TempDir("v2s-train-test");
    data::SyntheticSpec spec;
    spec.num_clips = 4;
    spec.frames_per_clip = 10;
    spec.frame_size = kFrameSize;
    spec.silence_prob = 0.2;
    manifest_ = new std::string(data::make_synthetic_corpus(spec, corpus_->path()));
  }
  static void TearDownTestSuite() {
    delete manifest_;
    delete corpus_;
  }

  std::vector<Example> examples(const TrainConfig& c) const {
    return load_examples(data::filter_split(data::load_manifest(*manifest_), data::Split::kTrain), c);
  }
  std::string out(const std::string& name) const { return (fs::path(tmp_.path()) / name).string(); }

  static std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static std::vector<std::string> lines(const std::string& path) {
    std::vector<std::string> out;
    std::istringstream in(read_text(path));
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }

  static TempDir* corpus_;
  static std::string* manifest_;
  TempDir tmp_;
};

TempDir* TrainingTest::corpus_ = nullptr;
std::string* TrainingTest::manifest_ = nullptr;

TEST_F(TrainingTest, ScheduleIsSixToOne) {
  TrainConfig c = tiny_config();
  c.total_gen_steps = 10;
  int critic_rows = 0, gen_rows = 0, since_gen = 0;
  TrainOptions o;
  o.out_dir = out("run");
  o.on_step = [&](const StepMetrics& m) {
    if (m.phase == Phase::kCritic) {
      ++critic_rows;
      ++since_gen;
    } else {
      ++gen_rows;
      EXPECT_EQ(since_gen, 6);
      since_gen = 0;
    }
  };
  const TrainResult r = train(c, *manifest_, o);
  EXPECT_EQ(r.gen_steps, 10);
  EXPECT_EQ(r.critic_steps, 60);
  EXPECT_EQ(critic_rows, 60);
  EXPECT_EQ(gen_rows, 10);
  const auto rows = lines(r.metrics_path);
  ASSERT_EQ(rows.size(), 71u);
  EXPECT_EQ(rows[0], metrics_header());
  EXPECT_EQ(lines(out("run") + "/timing.csv").size(), 71u);
  const auto state = load_checkpoint(r.checkpoint_dir);
  EXPECT_EQ(state->critic_step, 6 * state->gen_step);
}

TEST_F(TrainingTest, UpdatesAreIsolated) {
  TrainState state(tiny_config());
  const auto ex = examples(state.config);
  for (int step = 0; step < 3; ++step) {
    const Batch batch = next_batch(state, ex);
    const Eigen::MatrixXd fake = generate_batch(state, batch);
    const auto gen_before = nn::checksum(state.generator.parameters());
    const auto wave_before = nn::checksum(state.wave_critic.parameters());
    const auto power_before = nn::checksum(state.power_critic.parameters());
    const auto wave_steps = state.wave_opt.steps(), power_steps = state.power_opt.steps();
    critic_update(state, batch.audio, fake);
    EXPECT_EQ(nn::checksum(state.generator.parameters()), gen_before);
    EXPECT_NE(nn::checksum(state.wave_critic.parameters()), wave_before);
    EXPECT_NE(nn::checksum(state.power_critic.parameters()), power_before);
    EXPECT_EQ(state.wave_opt.steps(), wave_steps + 1);
    EXPECT_EQ(state.power_opt.steps(), power_steps + 1);
    EXPECT_EQ(state.generator_opt.steps(), step);

    const auto wave_mid = nn::checksum(state.wave_critic.parameters());
    const auto power_mid = nn::checksum(state.power_critic.parameters());
    const auto gen_mid = nn::checksum(state.generator.parameters());
    generator_update(state, next_batch(state, ex));
    EXPECT_EQ(nn::checksum(state.wave_critic.parameters()), wave_mid);
    EXPECT_EQ(nn::checksum(state.power_critic.parameters()), power_mid);
    EXPECT_NE(nn::checksum(state.generator.parameters()), gen_mid);
  }
}

TEST_F(TrainingTest, CriticLossDecreasesOnFixedBatch) {
  TrainConfig c = tiny_config();
  c.learning_rate = 1e-3;
  TrainState state(c);
  Rng rng(4);
  Eigen::MatrixXd real(16000, 2), fake(16000, 2);
  for (Eigen::Index i = 0; i < 16000; ++i) {
    real(i, 0) = 0.5 * std::sin(2 * std::numbers::pi * 440.0 * i / 16000.0);
    real(i, 1) = 0.5 * std::sin(2 * std::numbers::pi * 1000.0 * i / 16000.0);
    fake(i, 0) = rng.uniform(-0.1, 0.1);
    fake(i, 1) = rng.uniform(-0.1, 0.1);
  }
  const StepMetrics first = critic_update(state, real, fake);
  StepMetrics last;
  for (int i = 0; i < 49; ++i) last = critic_update(state, real, fake);
  EXPECT_LT(last.wave_critic + last.wave_gp, first.wave_critic + first.wave_gp);
  EXPECT_LT(last.power_critic + last.power_gp, first.power_critic + first.power_gp);
  EXPECT_LT(last.total, first.total);
}

TEST_F(TrainingTest, DisabledTermsReportZero) {
  TrainConfig c = tiny_config();
  c.enable_wave_critic = c.enable_power_critic = c.enable_pase_loss = c.enable_power_loss = false;
  TrainState state(c);
  const auto ex = examples(c);
  const StepMetrics m = generator_update(state, next_batch(state, ex));
  EXPECT_GT(m.mfcc, 0.0);
  EXPECT_EQ(m.total, 0.4 * m.mfcc);
  EXPECT_EQ(m.adversarial, 0.0);
  EXPECT_EQ(m.pase, 0.0);
  EXPECT_EQ(m.power, 0.0);
  const auto before = nn::checksum(state.wave_critic.parameters());
  const StepMetrics cm = critic_update(state, Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1));
  EXPECT_EQ(cm.active_critics, 0);
  EXPECT_EQ(cm.total, 0.0);
  EXPECT_EQ(state.critic_step, 1);
  EXPECT_EQ(nn::checksum(state.wave_critic.parameters()), before);
}

// A disabled term's inputs (here the perceptual extractor) cannot influence
// the parameter trajectory.
TEST_F(TrainingTest, DisabledTermLeavesNoTrace) {
  TrainConfig a = tiny_config();
  a.enable_pase_loss = false;
  TrainConfig b = a;
  b.pase_seed = a.pase_seed + 17;
  TrainOptions oa, ob;
  oa.out_dir = out("a");
  ob.out_dir = out("b");
  const TrainResult ra = train(a, *manifest_, oa), rb = train(b, *manifest_, ob);
  EXPECT_EQ(read_text(ra.metrics_path), read_text(rb.metrics_path));
  EXPECT_EQ(data::read_file(ra.checkpoint_dir + "/generator.bin").size(),
            data::read_file(rb.checkpoint_dir + "/generator.bin").size());
  const auto sa = load_checkpoint(ra.checkpoint_dir), sb = load_checkpoint(rb.checkpoint_dir);
  EXPECT_EQ(nn::checksum(sa->generator.parameters()), nn::checksum(sb->generator.parameters()));
  for (const auto& row : lines(ra.metrics_path)) {
    if (row.find(",generator,") != std::string::npos) {
      std::vector<std::string> cols;
      std::stringstream ss(row);
      for (std::string f; std::getline(ss, f, ',');) cols.push_back(f);
      EXPECT_EQ(cols[9], "0");
    }
  }
}

TEST_F(TrainingTest, GeneratorOverfitsWithoutCritics) {
  TrainConfig c = tiny_config();
  c.enable_wave_critic = c.enable_power_critic = false;
  c.augment = false;
  c.learning_rate = 1e-3;
  c.batch_size = 4;
  TrainState state(c);
  const auto ex = examples(c);
  std::vector<double> totals;
  for (int i = 0; i < 200; ++i) totals.push_back(generator_update(state, next_batch(state, ex)).total);
  double head = 0.0, tail = 0.0;
  for (int i = 0; i < 20; ++i) {
    head += totals[static_cast<size_t>(i)] / 20;
    tail += totals[totals.size() - 1 - static_cast<size_t>(i)] / 20;
  }
  EXPECT_LT(tail, head);
}

TEST_F(TrainingTest, NonFiniteLossAborts) {
  TrainState state(tiny_config());
  for (auto* p : state.generator.parameters()) {
    if (p->name.find("decoder") != std::string::npos && p->trainable) p->value.setConstant(NAN);
  }
  try {
    generator_update(state, next_batch(state, examples(state.config)));
    FAIL();
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("non-finite"), std::string::npos) << msg;
    EXPECT_NE(msg.find("step 1"), std::string::npos) << msg;
  }
}

TEST_F(TrainingTest, CheckpointRoundTripIsBitExact) {
  TrainConfig c = tiny_config();
  c.total_gen_steps = 1;
  TrainOptions o;
  o.out_dir = out("run");
  const TrainResult r = train(c, *manifest_, o);
  const auto state = load_checkpoint(r.checkpoint_dir);
  save_checkpoint(*state, out("again"));
  for (const char* f : {"generator.bin", "wave_critic.bin", "power_critic.bin", "trainer.bin"}) {
    EXPECT_EQ(data::read_file(r.checkpoint_dir + "/" + f), data::read_file(out("again") + "/" + f)) << f;
  }
  EXPECT_EQ(state->gen_step, 1);
  EXPECT_EQ(state->history.rows().size(), 7u);
  EXPECT_EQ(state->wave_opt.steps(), 6);
  const LoadedGenerator g = load_generator(r.checkpoint_dir);
  EXPECT_EQ(nn::checksum(g.generator->parameters()), nn::checksum(state->generator.parameters()));
  EXPECT_EQ(g.config, c);
}

TEST_F(TrainingTest, CorruptCheckpointsAreRejected) {
  TrainConfig c = tiny_config();
  c.total_gen_steps = 1;
  TrainOptions o;
  o.out_dir = out("run");
  const TrainResult r = train(c, *manifest_, o);
  const std::string gen = r.checkpoint_dir + "/generator.bin";
  auto bytes = data::read_file(gen);
  auto truncated = bytes;
  truncated.resize(bytes.size() / 2);
  data::write_file(gen, truncated);
  EXPECT_THROW(load_checkpoint(r.checkpoint_dir), FormatError);
  auto versioned = bytes;
  versioned[4] = 9;
  data::write_file(gen, versioned);
  try {
    load_generator(r.checkpoint_dir);
    FAIL();
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("version 9"), std::string::npos) << msg;
    EXPECT_NE(msg.find("version 1"), std::string::npos) << msg;
  }
  fs::remove(gen);
  EXPECT_THROW(load_checkpoint(r.checkpoint_dir), IoError);
}

TEST_F(TrainingTest, ResumeMatchesUninterruptedRun) {
  TrainConfig c = tiny_config();
  c.total_gen_steps = 4;
  TrainOptions full;
  full.out_dir = out("full");
  const TrainResult uninterrupted = train(c, *manifest_, full);

  TrainConfig first = c;
  first.total_gen_steps = 2;
  TrainOptions part;
  part.out_dir = out("part");
  const TrainResult half = train(first, *manifest_, part);
  part.resume_from = half.checkpoint_dir;
  const TrainResult resumed = train(c, *manifest_, part);
  EXPECT_EQ(resumed.gen_steps, 4);
  EXPECT_EQ(resumed.critic_steps, 24);
  EXPECT_EQ(read_text(resumed.metrics_path), read_text(uninterrupted.metrics_path));
  for (const char* f : {"generator.bin", "wave_critic.bin", "power_critic.bin"}) {
    EXPECT_EQ(data::read_file(resumed.checkpoint_dir + "/" + f), data::read_file(uninterrupted.checkpoint_dir + "/" + f))
        << f;
  }
  // The trainer file also records wall time, so compare its fields instead.
  const auto a = load_checkpoint(resumed.checkpoint_dir), b = load_checkpoint(uninterrupted.checkpoint_dir);
  EXPECT_EQ(a->rng, b->rng);
  EXPECT_EQ(a->sampler, b->sampler);
  ASSERT_EQ(a->history.rows().size(), b->history.rows().size());
  for (size_t i = 0; i < a->history.rows().size(); ++i) {
    StepMetrics x = a->history.rows()[i], y = b->history.rows()[i];
    x.wall_ms = y.wall_ms = 0.0;
    EXPECT_EQ(x, y) << i;
  }

  TrainConfig incompatible = c;
  incompatible.learning_rate *= 2;
  part.out_dir = out("other");
  EXPECT_THROW(train(incompatible, *manifest_, part), ConfigError);
}

TEST_F(TrainingTest, SeededRunsAreByteIdentical) {
  TrainOptions a, b;
  a.out_dir = out("a");
  b.out_dir = out("b");
  EXPECT_EQ(read_text(train(tiny_config(), *manifest_, a).metrics_path),
            read_text(train(tiny_config(), *manifest_, b).metrics_path));
}

TEST_F(TrainingTest, RejectsInvalidInputs) {
  TrainConfig c = tiny_config();
  c.batch_size = 0;
  c.learning_rate = -1;
  TrainOptions o;
  o.out_dir = out("run");
  try {
    train(c, *manifest_, o);
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("batch_size"), std::string::npos) << msg;
    EXPECT_NE(msg.find("learning_rate"), std::string::npos) << msg;
  }
  auto records = data::load_manifest(*manifest_);
  for (auto& r : records) r.split = data::Split::kTest;
  data::save_manifest(records, out("test_only.jsonl"));
  EXPECT_THROW(train(tiny_config(), out("test_only.jsonl"), o), ConfigError);
  TrainConfig big = tiny_config();
  big.frame_height = big.frame_width = 96;
  EXPECT_THROW(train(big, *manifest_, o), ShapeError);
}

TEST_F(TrainingTest, SynthesisLengthAndDeterminism) {
  TrainConfig c = tiny_config();
  TrainState state(c);
  const auto ex = examples(c);
  const Waveform a = synthesize(state.generator, c, ex[0].video);
  const Waveform b = synthesize(state.generator, c, ex[0].video);
  EXPECT_EQ(a.size(), ex[0].video.num_frames() * 640);
  EXPECT_EQ(a.samples(), b.samples());
}

}  // namespace
}  // namespace v2s::training
