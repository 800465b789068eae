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

#include "v2s/core/error.hpp"
#include "v2s/model/critics.hpp"
#include "v2s/model/generator.hpp"

namespace v2s::model {
namespace {

using Mat = nn::Matrix<double>;

VideoClip random_clip(int frames, int h, int w, Rng& rng) {
  std::vector<Frame> fs;
  for (int t = 0; t < frames; ++t) {
    Frame f(h, w);
    for (Index i = 0; i < f.size(); ++i) f.data()[i] = static_cast<float>(rng.uniform());
    fs.push_back(std::move(f));
  }
  return VideoClip(std::move(fs));
}

VideoClip with_frame(const VideoClip& clip, int t, float delta) {
  std::vector<Frame> fs = clip.frames();
  fs[static_cast<size_t>(t)] = (fs[static_cast<size_t>(t)].array() * (1.0f - delta) + 0.5f * delta).matrix();
  return VideoClip(std::move(fs));
}

GeneratorConfig small_config(int size = 96, double scale = 0.125) {
  GeneratorConfig c;
  c.width_scale = scale;
  c.frame_height = c.frame_width = size;
  return c;
}

TEST(GeneratorShapes, EncodeDecodeGenerate) {
  Rng rng(1);
  Generator<float> g(small_config(), rng);
  const VideoClip clip = random_clip(10, 96, 96, rng);
  const FeatureSequence f = encode(g, clip);
  EXPECT_EQ(f.num_frames(), 10);
  EXPECT_EQ(f.dim(), g.config().feature_dim());
  const Waveform w = decode(g, FeatureSequence{Eigen::MatrixXd::Random(5, f.dim())}, 16000);
  EXPECT_EQ(w.size(), 3200);
  EXPECT_EQ(generate(g, clip, 16000).size(), 6400);
}

TEST(GeneratorShapes, SeventyFiveFramesGiveThreeSeconds) {
  Rng rng(2);
  Generator<float> g(small_config(96, 0.25), rng);
  const Waveform w = generate(g, random_clip(75, 96, 96, rng), 16000);
  EXPECT_EQ(w.size(), 48000);
}

TEST(GeneratorShapes, OutputLengthForEveryShortClip) {
  Rng rng(3);
  Generator<float> g(small_config(32), rng);
  for (int t = 1; t <= 9; ++t) EXPECT_EQ(generate(g, random_clip(t, 32, 32, rng), 16000).size(), t * 640);
}

TEST(GeneratorShapes, WrongFrameSizeNamesBoth) {
  Rng rng(4);
  Generator<float> g(small_config(), rng);
  try {
    encode(g, random_clip(6, 64, 80, rng));
    FAIL();
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("96x96"), std::string::npos) << msg;
    EXPECT_NE(msg.find("64x80"), std::string::npos) << msg;
  }
}

TEST(GeneratorShapes, DecoderMustProduceTwoFrames) {
  GeneratorConfig c = small_config();
  c.samples_per_frame = 320;
  Rng rng(5);
  EXPECT_THROW(Generator<float>(c, rng), ConfigError);
}

TEST(GeneratorLocality, PreRecurrentFeaturesSeeFiveFrames) {
  Rng rng(6);
  Generator<double> g(small_config(32), rng);
  const VideoClip clip = random_clip(12, 32, 32, rng);
  const Eigen::MatrixXd base = encode_frames(g, clip).features;
  const Eigen::MatrixXd far = encode_frames(g, with_frame(clip, 9, 0.9f)).features;
  EXPECT_LT((far.row(0) - base.row(0)).cwiseAbs().maxCoeff(), 1e-6);
  const Eigen::MatrixXd near = encode_frames(g, with_frame(clip, 2, 0.9f)).features;
  EXPECT_GT((near.row(0) - base.row(0)).cwiseAbs().maxCoeff(), 1e-6);
  // Exactly the frames t-2..t+2 matter for frame t.
  for (int t = 0; t < 12; ++t) {
    const bool inside = std::abs(t - 9) <= 2;
    const double d = (far.row(t) - base.row(t)).cwiseAbs().maxCoeff();
    if (inside) {
      EXPECT_GT(d, 1e-6) << t;
    } else {
      EXPECT_LT(d, 1e-6) << t;
    }
  }
}

TEST(GeneratorLocality, RecurrentFeaturesSeeTheWholeClip) {
  Rng rng(7);
  Generator<double> g(small_config(32), rng);
  const VideoClip clip = random_clip(12, 32, 32, rng);
  const Eigen::MatrixXd base = encode(g, clip).features;
  const Eigen::MatrixXd far = encode(g, with_frame(clip, 11, 0.9f)).features;
  EXPECT_GT((far.row(0) - base.row(0)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(GeneratorDecode, IdenticalRowsGivePeriodicInterior) {
  Rng rng(8);
  Generator<double> g(small_config(32), rng);
  Eigen::RowVectorXd row(g.config().feature_dim());
  for (auto& v : row) v = rng.normal();
  const FeatureSequence f{row.replicate(8, 1)};
  const Eigen::VectorXd w = decode(g, f, 16000).samples();
  // Segments 1..7 each overlap an identical predecessor.
  double dev = 0.0;
  for (Index i = 640; i + 640 < w.size(); ++i) dev = std::max(dev, std::abs(w[i + 640] - w[i]));
  EXPECT_LT(dev, 1e-5);
  EXPECT_GT((w.segment(640, 640).array() - w[640]).abs().maxCoeff(), 1e-6);
}

TEST(GeneratorDecode, TanhBoundHoldsForLargeWeights) {
  Rng rng(9);
  Generator<float> g(small_config(32), rng);
  for (auto* p : g.parameters()) {
    if (p->name.rfind("generator.decoder5", 0) == 0) p->value *= 1e4f;
  }
  const Waveform w = generate(g, random_clip(6, 32, 32, rng), 16000);
  EXPECT_LE(w.samples().cwiseAbs().maxCoeff(), 1.0);
}

TEST(GeneratorDecode, DeterministicUnderFixedWeights) {
  Rng rng(10);
  Generator<float> g(small_config(32), rng);
  const VideoClip clip = random_clip(7, 32, 32, rng);
  EXPECT_EQ(generate(g, clip, 16000).samples(), generate(g, clip, 16000).samples());
  Rng r1(77), r2(77);
  Generator<float> a(small_config(32), r1), b(small_config(32), r2);
  EXPECT_EQ(nn::checksum(a.parameters()), nn::checksum(b.parameters()));
}

TEST(GeneratorGradients, MatchFiniteDifferences) {
  Rng rng(11);
  GeneratorConfig c = small_config(16, 0.0625);
  Generator<double> g(c, rng);
  const VideoClip a = random_clip(6, 16, 16, rng), b = random_clip(6, 16, 16, rng);
  const std::vector<const VideoClip*> batch{&a, &b};
  Mat w(6 * 640, 2);
  for (Index i = 0; i < w.size(); ++i) w.data()[i] = rng.normal();
  const auto loss = [&] { return (g.forward(batch, Mode::kForward).array() * w.array()).sum(); };
  auto params = g.parameters();
  nn::zero_grads(params);
  g.forward(batch, Mode::kForward);
  g.backward(w);
  int checked = 0;
  for (auto* p : params) {
    if (!p->trainable) continue;
    for (int k = 0; k < 2; ++k) {
      const Index i = rng.uniform_int(0, p->value.size() - 1);
      const double x0 = p->value.data()[i];
      // Small step: batch-normalized ReLU stacks have many units near a kink.
      const double h = 1e-8;
      p->value.data()[i] = x0 + h;
      const double up = loss();
      p->value.data()[i] = x0 - h;
      const double down = loss();
      p->value.data()[i] = x0;
      const double fd = (up - down) / (2 * h);
      EXPECT_NEAR(p->grad.data()[i], fd, 1e-4 * std::max(1.0, std::abs(fd))) << p->name << "[" << i << "]";
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(GeneratorGradients, EveryParameterIsReached) {
  Rng rng(12);
  Generator<float> g(small_config(32), rng);
  const VideoClip a = random_clip(6, 32, 32, rng), b = random_clip(6, 32, 32, rng);
  nn::Matrix<float> w = nn::Matrix<float>::Random(6 * 640, 2);
  auto params = g.parameters();
  nn::zero_grads(params);
  g.forward({&a, &b}, Mode::kTrain);
  g.backward(w);
  for (auto* p : params) {
    if (p->trainable) {
      EXPECT_GT(p->grad.norm(), 0.0f) << p->name;
    }
  }


}

WaveCritic<double> small_wave_critic(Rng& rng) { return WaveCritic<double>({0.25, 16000}, rng); }
PowerCritic<double> small_power_critic(Rng& rng) { return PowerCritic<double>({0.125, 257, 98}, rng); }

template <typename Critic>
void check_critic(Critic& net, Index size, Rng& rng) {
  const Mat zero = Mat::Zero(size, 1);
  EXPECT_TRUE(std::isfinite(net.forward(zero)(0)));
  Mat x(size, 1);
  for (auto& v : x.reshaped()) v = rng.uniform(-1.0, 1.0);
  EXPECT_NE(net.forward(x)(0), net.forward(zero)(0));

  // Input gradient against central differences at 5 random coordinates.
  net.forward(x);
  const Mat g = net.backward(nn::Vector<double>::Ones(1), false);
  EXPECT_TRUE(g.allFinite());
  for (int k = 0; k < 5; ++k) {
    const Index i = rng.uniform_int(0, size - 1);
    const double h = 1e-5;
    Mat xp = x, xm = x;
    xp(i, 0) += h;
    xm(i, 0) -= h;
    const double fd = (net.forward(xp)(0) - net.forward(xm)(0)) / (2 * h);
    EXPECT_NEAR(g(i, 0), fd, 1e-2 * std::max(std::abs(fd), 1e-8)) << "coordinate " << i;
  }
}

TEST(Critics, WaveCriticContract) {
  Rng rng(13);
  auto net = small_wave_critic(rng);
  check_critic(net, 16000, rng);
  EXPECT_THROW(net.forward(Mat::Zero(15999, 1)), ShapeError);
  EXPECT_THROW(critic_wave(net, Waveform(Eigen::VectorXd::Zero(8000))), ShapeError);
  EXPECT_TRUE(std::isfinite(critic_wave(net, Waveform(Eigen::VectorXd::Zero(16000)))));
}

TEST(Critics, PowerCriticContract) {
  Rng rng(14);
  auto net = small_power_critic(rng);
  check_critic(net, 257 * 98, rng);
  EXPECT_THROW(net.forward(Mat::Zero(257 * 97, 1)), ShapeError);
  EXPECT_THROW(critic_power(net, NormalizedSpectrogram(Eigen::MatrixXd::Zero(257, 50))), ShapeError);
}

TEST(Critics, BatchScoresMatchSingleScores) {
  Rng rng(15);
  auto net = small_wave_critic(rng);
  Mat x(16000, 3);
  for (auto& v : x.reshaped()) v = rng.uniform(-1.0, 1.0);
  const nn::Vector<double> all = net.forward(x);
  for (Index b = 0; b < 3; ++b) EXPECT_NEAR(net.forward(x.col(b))(0), all[b], 1e-12);
}

template <typename Critic>
void check_tangent_gradients(Critic& net, Index size, Rng& rng, int probes_per_param) {
  // phi(theta) = sum_b <v_b, grad_x D(x_b)>; the tangent pass computes it and
  // backward() after it gives d(phi)/d(theta).
  Mat x(size, 2), v(size, 2);
  for (auto& e : x.reshaped()) e = rng.uniform(-1.0, 1.0);
  for (auto& e : v.reshaped()) e = rng.normal();
  const auto phi = [&] {
    net.forward(x);
    return net.forward_tangent(v).sum();
  };
  auto params = net.parameters();
  nn::zero_grads(params);
  phi();
  net.backward(nn::Vector<double>::Ones(2), true);
  // Cross-check the tangent value itself against the input gradient.
  net.forward(x);
  const Mat gx = net.backward(nn::Vector<double>::Ones(2), false);
  EXPECT_NEAR(phi(), (gx.array() * v.array()).sum(), 1e-8 * std::max(1.0, std::abs(phi())));
  for (auto* p : params) {
    for (int k = 0; k < probes_per_param; ++k) {
      const Index i = rng.uniform_int(0, p->value.size() - 1);
      const double w0 = p->value.data()[i];
      // The tangent map jumps wherever an activation mask flips; the step
      // must be small enough that no unit crosses zero.
      const double h = 1e-9;
      p->value.data()[i] = w0 + h;
      const double up = phi();
      p->value.data()[i] = w0 - h;
      const double down = phi();
      p->value.data()[i] = w0;
      const double fd = (up - down) / (2 * h);
      EXPECT_NEAR(p->grad.data()[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << p->name << "[" << i << "]";
    }
  }
}

TEST(Critics, WaveTangentParameterGradients) {
  Rng rng(16);
  auto net = small_wave_critic(rng);
  check_tangent_gradients(net, 16000, rng, 2);
}

TEST(Critics, PowerTangentParameterGradients) {
  Rng rng(17);
  auto net = small_power_critic(rng);
  check_tangent_gradients(net, 257 * 98, rng, 1);
}

TEST(Critics, EveryParameterIsReached) {
  Rng rng(18);
  WaveCritic<float> wave({0.25, 16000}, rng);
  PowerCritic<float> power({0.25, 257, 98}, rng);
  nn::Matrix<float> xw = nn::Matrix<float>::Random(16000, 2);
  nn::Matrix<float> xp = nn::Matrix<float>::Random(257 * 98, 2);
  auto pw = wave.parameters(), pp = power.parameters();
  nn::zero_grads(pw);
  nn::zero_grads(pp);
  wave.forward(xw);
  wave.backward(nn::Vector<float>::Ones(2), true);
  power.forward(xp);
  power.backward(nn::Vector<float>::Ones(2), true);
  for (auto* p : pw) EXPECT_GT(p->grad.norm(), 0.0f) << p->name;
  for (auto* p : pp) EXPECT_GT(p->grad.norm(), 0.0f) << p->name;
}

}  // namespace
}  // namespace v2s::model
