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
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "v2s/core/error.hpp"
#include "v2s/losses/losses.hpp"

namespace v2s::losses {
namespace {

// D(x) = scale * <u, x> + offset for every column.
class LinearCritic final : public Critic {
 public:
  LinearCritic(Eigen::VectorXd u, double scale = 1.0, double offset = 0.0)
      : u_(std::move(u)), scale_(scale), offset_(offset) {}
  Eigen::VectorXd scores(const Eigen::MatrixXd& x) override {
    batch_ = x.cols();
    return (scale_ * (u_.transpose() * x)).transpose().array() + offset_;
  }
  Eigen::MatrixXd backward(const Eigen::VectorXd& w, bool) override {
    return scale_ * u_ * w.transpose();
  }
  Eigen::VectorXd tangent(const Eigen::MatrixXd& v) override { return scale_ * (u_.transpose() * v).transpose(); }

 private:
  Eigen::VectorXd u_;
  double scale_, offset_;
  Eigen::Index batch_ = 0;
};

class ConstantCritic final : public Critic {
 public:
  ConstantCritic(double c, Eigen::Index dim) : c_(c), dim_(dim) {}
  Eigen::VectorXd scores(const Eigen::MatrixXd& x) override {
    batch_ = x.cols();
    return Eigen::VectorXd::Constant(x.cols(), c_);
  }
  Eigen::MatrixXd backward(const Eigen::VectorXd&, bool) override { return Eigen::MatrixXd::Zero(dim_, batch_); }
  Eigen::VectorXd tangent(const Eigen::MatrixXd& v) override { return Eigen::VectorXd::Zero(v.cols()); }

 private:
  double c_;
  Eigen::Index dim_;
  Eigen::Index batch_ = 0;
};

class OpaqueCritic final : public Critic {
 public:
  Eigen::VectorXd scores(const Eigen::MatrixXd& x) override { return Eigen::VectorXd::Zero(x.cols()); }
  Eigen::MatrixXd backward(const Eigen::VectorXd&, bool) override { throw DifferentiationError("opaque"); }
  Eigen::VectorXd tangent(const Eigen::MatrixXd&) override { throw DifferentiationError("opaque"); }
  bool differentiable() const override { return false; }
};

Eigen::VectorXd unit(Eigen::Index n, unsigned seed) {
  std::mt19937_64 gen(seed);
  const Eigen::VectorXd v = oracle::random_vector(n, gen);
  return v / v.norm();
}

Eigen::MatrixXd random_batch(Eigen::Index n, Eigen::Index b, unsigned seed, double amp = 0.5) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d(-amp, amp);
  Eigen::MatrixXd m(n, b);
  for (auto& v : m.reshaped()) v = d(gen);
  return m;
}

Eigen::VectorXd sine(double hz, Eigen::Index n, double amp) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / 16000.0);
  return x;
}

TEST(CriticLoss, ClosedForms) {
  ConstantCritic c(3.5, 4);
  EXPECT_EQ(critic_loss(c, random_batch(4, 3, 1), random_batch(4, 3, 2)), 0.0);
  LinearCritic sum(Eigen::VectorXd::Ones(4));
  EXPECT_DOUBLE_EQ(critic_loss(sum, Eigen::MatrixXd::Ones(4, 1), Eigen::MatrixXd::Zero(4, 1)), -4.0);
}

TEST(CriticLoss, MatchesDotProducts) {
  const Eigen::VectorXd u = unit(50, 3);
  LinearCritic d(u, 1.7, 0.2);
  const Eigen::MatrixXd real = random_batch(50, 6, 4), fake = random_batch(50, 6, 5);
  double expected = 0.0;
  for (int b = 0; b < 6; ++b) expected += (1.7 * u.dot(fake.col(b)) - 1.7 * u.dot(real.col(b))) / 6.0;
  EXPECT_NEAR(critic_loss(d, real, fake), expected, 1e-12);
}

TEST(CriticLoss, EmptyOrMismatchedBatchRejected) {
  LinearCritic d(Eigen::VectorXd::Ones(4));
  EXPECT_THROW(critic_loss(d, Eigen::MatrixXd(4, 0), Eigen::MatrixXd(4, 0)), ShapeError);
  EXPECT_THROW(critic_loss(d, Eigen::MatrixXd::Zero(4, 2), Eigen::MatrixXd::Zero(4, 3)), ShapeError);
}

TEST(GradientPenalty, ClosedForms) {
  Rng rng(1);
  const Eigen::MatrixXd real = random_batch(30, 5, 6), fake = random_batch(30, 5, 7);
  LinearCritic unit_slope(unit(30, 8));
  EXPECT_NEAR(gradient_penalty(unit_slope, real, fake, rng, 10.0), 0.0, 1e-24);
  ConstantCritic zero(0.0, 30);
  EXPECT_DOUBLE_EQ(gradient_penalty(zero, real, fake, rng, 10.0), 10.0);
  LinearCritic double_slope(unit(30, 9), 2.0);
  EXPECT_NEAR(gradient_penalty(double_slope, real, fake, rng, 10.0), 10.0, 1e-12);
}

TEST(GradientPenalty, ErrorsAndLambda) {
  Rng rng(2);
  OpaqueCritic opaque;
  EXPECT_THROW(gradient_penalty(opaque, Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(3, 2), rng, 10.0),
               DifferentiationError);
  ConstantCritic zero(0.0, 3);
  EXPECT_THROW(gradient_penalty(zero, Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(3, 2), rng, -1.0),
               ConfigError);
  EXPECT_THROW(gradient_penalty(zero, Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(4, 2), rng, 1.0),
               ShapeError);
}

TEST(Interpolate, LiesBetweenEndpoints) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd real = random_batch(40, 4, 10 + trial), fake = random_batch(40, 4, 50 + trial);
    const InterpolatedSample s = interpolate(real, fake, rng);
    EXPECT_TRUE((s.epsilon.array() >= 0.0).all() && (s.epsilon.array() <= 1.0).all());
    const Eigen::ArrayXXd lo = real.array().min(fake.array()), hi = real.array().max(fake.array());
    EXPECT_TRUE((s.x_hat.array() >= lo - 1e-15).all());
    EXPECT_TRUE((s.x_hat.array() <= hi + 1e-15).all());
    for (int b = 0; b < 4; ++b) {
      EXPECT_TRUE(s.x_hat.col(b).isApprox(s.epsilon[b] * real.col(b) + (1 - s.epsilon[b]) * fake.col(b)));
    }
  }
}

// The penalty's parameter gradient, accumulated through the tangent pass,
// against central differences of the penalty value in the weights.
TEST(GradientPenalty, ParameterGradientMatchesFiniteDifferences) {
  Rng rng(4);
  model::WaveCritic<double> net({0.25, 16000}, rng);
  NetworkCritic critic(net);
  const Eigen::MatrixXd x_hat = random_batch(16000, 2, 11);
  auto params = net.parameters();
  nn::zero_grads(params);
  gradient_penalty_at(critic, x_hat, 10.0, true);
  int checked = 0;
  for (auto* p : params) {
    for (int k = 0; k < 3; ++k) {
      const Eigen::Index i = rng.uniform_int(0, p->value.size() - 1);
      const double w0 = p->value.data()[i];
      const double h = 1e-9;
      p->value.data()[i] = w0 + h;
      const double up = gradient_penalty_at(critic, x_hat, 10.0, false);
      p->value.data()[i] = w0 - h;
      const double down = gradient_penalty_at(critic, x_hat, 10.0, false);
      p->value.data()[i] = w0;
      const double fd = (up - down) / (2 * h);
      EXPECT_NEAR(p->grad.data()[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << p->name << "[" << i << "]";
      ++checked;
    }
  }
  EXPECT_EQ(checked, 3 * static_cast<int>(params.size()));
}

TEST(CriticLoss, ParameterGradientMatchesFiniteDifferences) {
  Rng rng(5);
  model::PowerCritic<double> net({0.125, 257, 98}, rng);
  NetworkCritic critic(net);
  const Eigen::MatrixXd real = random_batch(257 * 98, 2, 12, 1.0), fake = random_batch(257 * 98, 2, 13, 1.0);
  auto params = net.parameters();
  nn::zero_grads(params);
  critic_loss(critic, real, fake, true);
  for (auto* p : params) {
    const Eigen::Index i = rng.uniform_int(0, p->value.size() - 1);
    const double w0 = p->value.data()[i];
    const double h = 1e-7;
    p->value.data()[i] = w0 + h;
    const double up = critic_loss(critic, real, fake);
    p->value.data()[i] = w0 - h;
    const double down = critic_loss(critic, real, fake);
    p->value.data()[i] = w0;
    const double fd = (up - down) / (2 * h);
    EXPECT_NEAR(p->grad.data()[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << p->name;
  }
}

TEST(AdversarialLoss, ClosedFormsAndOracle) {
  const Eigen::MatrixXd clips = random_batch(20, 3, 14), specs = random_batch(12, 3, 15);
  ConstantCritic zw(0.0, 20), zp(0.0, 12), one(1.0, 20), two(2.0, 12);
  EXPECT_EQ(generator_adversarial_loss(zw, zp, clips, specs), 0.0);
  EXPECT_EQ(generator_adversarial_loss(one, two, clips, specs), -3.0);
  const Eigen::VectorXd uw = unit(20, 16), up = unit(12, 17);
  LinearCritic lw(uw, 0.7), lp(up, -1.3);
  double expected = 0.0;
  for (int b = 0; b < 3; ++b) expected -= (0.7 * uw.dot(clips.col(b)) - 1.3 * up.dot(specs.col(b))) / 3.0;
  EXPECT_NEAR(generator_adversarial_loss(lw, lp, clips, specs), expected, 1e-12);
  const AdversarialTerm t = adversarial_term(lw, clips);
  EXPECT_NEAR(t.value, -0.7 * (uw.transpose() * clips).mean(), 1e-12);
  EXPECT_TRUE(t.input_gradient.isApprox(-0.7 / 3.0 * uw * Eigen::RowVector3d::Ones()));
}

class IdentityExtractor final : public PerceptualExtractor {
 public:
  Eigen::MatrixXd features(const Eigen::VectorXd& s) override { return s; }
  Eigen::VectorXd features_vjp(const Eigen::VectorXd&, const Eigen::MatrixXd& g) override { return g.col(0); }
  std::string id() const override { return "identity"; }
  using PerceptualExtractor::features;
};

TEST(PaseLoss, ClosedForms) {
  IdentityExtractor id;
  const Waveform zero(Eigen::VectorXd::Zero(4)), half(Eigen::VectorXd::Constant(4, 0.5));
  EXPECT_DOUBLE_EQ(pase_loss(id, zero, half), 0.5);
  EXPECT_EQ(pase_loss(id, half, half), 0.0);
  EXPECT_THROW(pase_loss(id, zero, Waveform(Eigen::VectorXd::Zero(5))), ShapeError);
}

// Features recomputed by direct convolution sums from the extractor's weights.
Eigen::MatrixXd brute_force_features(const FallbackExtractor& e, const Eigen::VectorXd& x) {
  Eigen::MatrixXd a = x;
  for (const auto& layer : e.layers()) {
    const Eigen::Index frames = (a.rows() - layer.kernel) / layer.stride + 1;
    Eigen::MatrixXd out(frames, layer.out_channels);
    for (Eigen::Index t = 0; t < frames; ++t)
      for (int co = 0; co < layer.out_channels; ++co) {
        double acc = layer.bias[co];
        for (int ci = 0; ci < layer.in_channels; ++ci)
          for (int k = 0; k < layer.kernel; ++k) acc += a(t * layer.stride + k, ci) * layer.weight(ci * layer.kernel + k, co);
        out(t, co) = std::tanh(acc);
      }
    a = out;
  }
  return a;
}

TEST(FallbackExtractor, MatchesBruteForceAndLossOracle) {
  FallbackExtractor e(7);
  for (unsigned seed = 0; seed < 3; ++seed) {
    const Eigen::VectorXd x = random_batch(3000, 1, 20 + seed), y = random_batch(3000, 1, 40 + seed);
    const Eigen::MatrixXd fx = brute_force_features(e, x), fy = brute_force_features(e, y);
    EXPECT_LT((e.features(x) - fx).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(pase_loss(e, Waveform(x), Waveform(y)), (fx - fy).cwiseAbs().mean(), 1e-12);
  }
  EXPECT_EQ(e.features(Eigen::VectorXd::Zero(16000)).rows(), 98);
}

TEST(FallbackExtractor, DeterministicAndSeedSensitive) {
  const Eigen::VectorXd s = sine(300.0, 4000, 0.5);
  auto a = fallback_extractor(3), b = fallback_extractor(3), c = fallback_extractor(4);
  EXPECT_EQ(a->features(s), b->features(s));
  EXPECT_GT((a->features(s) - c->features(s)).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_GT(pase_loss(*a, Waveform(s), Waveform(Eigen::VectorXd::Zero(4000))), 1e-3);
  EXPECT_TRUE(a->deterministic());
  EXPECT_NE(a->id(), c->id());
  EXPECT_THROW(a->features(Eigen::VectorXd::Zero(100)), ShapeError);
}

TEST(PowerLoss, ClosedForms) {
  const Eigen::VectorXd x = random_batch(4000, 1, 21, 0.3);
  EXPECT_EQ(power_loss(Waveform(x), Waveform(x)), 0.0);
  EXPECT_NEAR(power_loss(Waveform(x), Waveform(std::exp(1.0) * x)), 2.0, 1e-12);
  EXPECT_THROW(power_loss(Waveform(x), Waveform(x.head(3999))), ShapeError);
  EXPECT_THROW(power_loss(Waveform(x.head(300)), Waveform(x.head(300))), ShapeError);
}

TEST(PowerLoss, MatchesNaiveDftOracle) {
  for (unsigned seed = 0; seed < 3; ++seed) {
    const Eigen::VectorXd x = random_batch(1200, 1, 60 + seed), y = random_batch(1200, 1, 70 + seed);
    const Eigen::MatrixXd lx = oracle::naive_power(x).cwiseMax(1e-10).array().log().matrix();
    const Eigen::MatrixXd ly = oracle::naive_power(y).cwiseMax(1e-10).array().log().matrix();
    EXPECT_NEAR(power_loss(Waveform(x), Waveform(y)), (lx - ly).cwiseAbs().mean(), 1e-5);
  }
}

TEST(MfccLoss, ClosedFormsAndOracle) {
  const Eigen::VectorXd x = random_batch(2000, 1, 22), y = random_batch(2000, 1, 23);
  EXPECT_EQ(mfcc_loss(Waveform(x), Waveform(x)), 0.0);
  EXPECT_NEAR(mfcc_loss(Waveform(x), Waveform(-x)), 0.0, 1e-9);
  EXPECT_NEAR(mfcc_loss(Waveform(x), Waveform(y)), (oracle::naive_mfcc(x) - oracle::naive_mfcc(y)).cwiseAbs().mean(),
              1e-5);
  EXPECT_THROW(mfcc_loss(Waveform(x), Waveform(y.head(1000))), ShapeError);
}

TEST(Losses, SymmetricAndNonNegative) {
  FallbackExtractor e(1);
  for (unsigned seed = 0; seed < 4; ++seed) {
    const Waveform x(random_batch(3000, 1, 80 + seed).col(0)), y(random_batch(3000, 1, 90 + seed).col(0));
    EXPECT_DOUBLE_EQ(power_loss(x, y), power_loss(y, x));
    EXPECT_DOUBLE_EQ(mfcc_loss(x, y), mfcc_loss(y, x));
    EXPECT_DOUBLE_EQ(pase_loss(e, x, y), pase_loss(e, y, x));
    EXPECT_GE(power_loss(x, y), 0.0);
    EXPECT_GE(mfcc_loss(x, y), 0.0);
    EXPECT_GE(pase_loss(e, x, y), 0.0);
  }
}

TEST(Losses, GradientsMatchFiniteDifferences) {
  const Eigen::VectorXd x = random_batch(1500, 1, 24), y = random_batch(1500, 1, 25);
  FallbackExtractor e(2);
  const LossWithGradient p = power_loss_and_grad(x, y), m = mfcc_loss_and_grad(x, y),
                         q = pase_loss_and_grad(e, x, y);
  const auto fp = [&](const Eigen::VectorXd& v) { return power_loss_and_grad(x, v).value; };
  const auto fm = [&](const Eigen::VectorXd& v) { return mfcc_loss_and_grad(x, v).value; };
  const auto fq = [&](const Eigen::VectorXd& v) { return pase_loss_and_grad(e, x, v).value; };
  for (Eigen::Index i : {5, 170, 399, 640, 1000, 1499}) {
    EXPECT_NEAR(p.gradient[i], oracle::central_difference(fp, y, i, 1e-7), 1e-6) << i;
    EXPECT_NEAR(m.gradient[i], oracle::central_difference(fm, y, i, 1e-7), 1e-6) << i;
    EXPECT_NEAR(q.gradient[i], oracle::central_difference(fq, y, i, 1e-7), 1e-6) << i;
  }
}

TEST(PowerCriticInputs, PipelineAndGradient) {
  const Eigen::MatrixXd clips = random_batch(1200, 2, 26);
  const Eigen::MatrixXd in = power_critic_inputs(clips);
  ASSERT_EQ(in.rows(), 257 * 6);
  EXPECT_LE(in.cwiseAbs().maxCoeff(), 1.0);
  std::mt19937_64 gen(3);
  const Eigen::MatrixXd w = oracle::random_vector(in.size(), gen).reshaped(in.rows(), in.cols());
  const Eigen::MatrixXd g = power_critic_inputs_vjp(clips, w);
  for (Eigen::Index i : {0, 333, 1199}) {
    const auto f = [&](const Eigen::VectorXd& c) {
      Eigen::MatrixXd m = clips;
      m.col(1) = c;
      return (power_critic_inputs(m).array() * w.array()).sum();
    };
    EXPECT_NEAR(g(i, 1), oracle::central_difference(f, clips.col(1), i, 1e-7), 1e-5);
  }
}

TEST(TotalLoss, WeightsAndToggles) {
  const LossWeights w;
  EXPECT_NEAR(total_generator_loss(w, {1, 1, 1, 1}), 191.4, 1e-12);
  LossToggles only_adv{true, true, false, false, false};
  EXPECT_EQ(total_generator_loss(w, {2, 9, 9, 9}, only_adv), 2.0);
  EXPECT_EQ(total_generator_loss(w, {0, 0, 0, 0}), 0.0);
  const GeneratorLossParts parts{0.3, 0.02, 1.7, 4.1};
  const double full = total_generator_loss(w, parts);
  EXPECT_NEAR(full - total_generator_loss(w, parts, {true, true, false, true, true}), 140 * 0.02, 1e-12);
  EXPECT_NEAR(full - total_generator_loss(w, parts, {true, true, true, false, true}), 50 * 1.7, 1e-12);
  EXPECT_NEAR(full - total_generator_loss(w, parts, {true, true, true, true, false}), 0.4 * 4.1, 1e-12);
  EXPECT_NEAR(full - total_generator_loss(w, parts, {false, false, true, true, true}), 0.3, 1e-12);
}

}  // namespace
}  // namespace v2s::losses
