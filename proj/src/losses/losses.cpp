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

#include "v2s/losses/losses.hpp"

#include <cmath>
#include <sstream>

#include "v2s/core/error.hpp"
#include "v2s/dsp/stft.hpp"

namespace v2s::losses {

namespace {

void require_batch(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake, const char* what) {
  if (real.cols() == 0 || fake.cols() == 0) throw ShapeError(std::string(what) + ": empty batch");
  if (real.rows() != fake.rows() || real.cols() != fake.cols()) {
    std::ostringstream os;
    os << what << ": real batch is " << real.rows() << "x" << real.cols() << " but fake batch is "
       << fake.rows() << "x" << fake.cols();
    throw ShapeError(os.str());
  }
}

void require_same_length(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
  }
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Mean |a - b| and d/db of it.
double mean_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::MatrixXd* grad_b) {
  const Eigen::ArrayXXd d = b.array() - a.array();
  const double n = static_cast<double>(d.size());
  if (grad_b) *grad_b = (d.unaryExpr(&sign) / n).matrix();
  return d.abs().sum() / n;
}

}  // namespace

double critic_loss(Critic& critic, const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake,
                   bool accumulate_param_grads) {
  if (real.cols() == 0 || fake.cols() == 0) throw ShapeError("critic_loss: empty batch");
  if (real.cols() != fake.cols()) throw ShapeError("critic_loss: real and fake batches differ in size");
  const double b = static_cast<double>(real.cols());
  const double real_mean = critic.scores(real).mean();
  if (accumulate_param_grads) critic.backward(Eigen::VectorXd::Constant(real.cols(), -1.0 / b), true);
  const double fake_mean = critic.scores(fake).mean();
  if (accumulate_param_grads) critic.backward(Eigen::VectorXd::Constant(fake.cols(), 1.0 / b), true);
  return fake_mean - real_mean;
}

InterpolatedSample interpolate(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake, Rng& rng) {
  require_batch(real, fake, "interpolate");
  InterpolatedSample s;
  s.epsilon.resize(real.cols());
  s.x_hat.resize(real.rows(), real.cols());
  for (Eigen::Index b = 0; b < real.cols(); ++b) {
    const double e = rng.uniform();
    s.epsilon[b] = e;
    s.x_hat.col(b) = e * real.col(b) + (1.0 - e) * fake.col(b);
  }
  return s;
}

double gradient_penalty_at(Critic& critic, const Eigen::MatrixXd& x_hat, double lambda,
                           bool accumulate_param_grads) {
  if (!critic.differentiable()) throw DifferentiationError("gradient_penalty: critic is not differentiable");
  if (!(lambda >= 0.0)) throw ConfigError("gradient_penalty: lambda must be ≥ 0");
  const Eigen::Index batch = x_hat.cols();
  critic.scores(x_hat);
  const Eigen::MatrixXd g = critic.backward(Eigen::VectorXd::Ones(batch), false);
  const Eigen::VectorXd norms = g.colwise().norm().transpose();
  const double value = lambda * (norms.array() - 1.0).square().mean();
  if (accumulate_param_grads && lambda > 0.0) {
    // d/dg of lambda/B * (||g|| - 1)^2 is the direction whose tangent pass
    // yields the penalty's parameter gradient.
    Eigen::MatrixXd v(g.rows(), batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      v.col(b) = norms[b] > 0.0 ? Eigen::VectorXd(2.0 * lambda * (norms[b] - 1.0) / (norms[b] * batch) * g.col(b))
                                : Eigen::VectorXd::Zero(g.rows());
    }
    critic.tangent(v);
    critic.backward(Eigen::VectorXd::Ones(batch), true);
  }
  return value;
}

double gradient_penalty(Critic& critic, const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake, Rng& rng,
                        double lambda, bool accumulate_param_grads) {
  const InterpolatedSample s = interpolate(real, fake, rng);
  return gradient_penalty_at(critic, s.x_hat, lambda, accumulate_param_grads);
}

AdversarialTerm adversarial_term(Critic& critic, const Eigen::MatrixXd& fake) {
  if (fake.cols() == 0) throw ShapeError("adversarial loss: empty batch");
  const double b = static_cast<double>(fake.cols());
  AdversarialTerm t;
  t.value = -critic.scores(fake).mean();
  t.input_gradient = critic.backward(Eigen::VectorXd::Constant(fake.cols(), -1.0 / b), false);
  return t;
}

double generator_adversarial_loss(Critic& wave, Critic& power, const Eigen::MatrixXd& fake_clips,
                                  const Eigen::MatrixXd& fake_specs) {
  if (fake_clips.cols() == 0 || fake_specs.cols() == 0) throw ShapeError("adversarial loss: empty batch");
  return -wave.scores(fake_clips).mean() - power.scores(fake_specs).mean();
}

LossWithGradient pase_loss_and_grad(PerceptualExtractor& extractor, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& x_tilde) {
  require_same_length(x.size(), x_tilde.size(), "pase_loss");
  const Eigen::MatrixXd fx = extractor.features(x);
  const Eigen::MatrixXd fy = extractor.features(x_tilde);
  Eigen::MatrixXd g;
  LossWithGradient out;
  out.value = mean_abs_diff(fx, fy, &g);
  out.gradient = extractor.features_vjp(x_tilde, g);
  return out;
}

double pase_loss(PerceptualExtractor& extractor, const Waveform& x, const Waveform& x_tilde) {
  require_same_length(x.size(), x_tilde.size(), "pase_loss");
  return mean_abs_diff(extractor.features(x.samples()), extractor.features(x_tilde.samples()), nullptr);
}

LossWithGradient power_loss_and_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& x_tilde,
                                     const dsp::StftParams& params) {
  require_same_length(x.size(), x_tilde.size(), "power_loss");
  Eigen::MatrixXd g;
  LossWithGradient out;
  out.value = mean_abs_diff(dsp::log_power_spectrogram(x, params), dsp::log_power_spectrogram(x_tilde, params), &g);
  out.gradient = dsp::log_power_spectrogram_vjp(x_tilde, params, dsp::kDefaultLogFloor, g);
  return out;
}

double power_loss(const Waveform& x, const Waveform& x_tilde) {
  require_same_length(x.size(), x_tilde.size(), "power_loss");
  return mean_abs_diff(dsp::log_power_spectrogram(x), dsp::log_power_spectrogram(x_tilde), nullptr);
}

LossWithGradient mfcc_loss_and_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& x_tilde,
                                    const dsp::MfccParams& params) {
  require_same_length(x.size(), x_tilde.size(), "mfcc_loss");
  Eigen::MatrixXd g;
  LossWithGradient out;
  out.value = mean_abs_diff(dsp::mfcc(x, params), dsp::mfcc(x_tilde, params), &g);
  out.gradient = dsp::mfcc_vjp(x_tilde, params, g);
  return out;
}

double mfcc_loss(const Waveform& x, const Waveform& x_tilde) {
  require_same_length(x.size(), x_tilde.size(), "mfcc_loss");
  return mean_abs_diff(dsp::mfcc(x), dsp::mfcc(x_tilde), nullptr);
}

Eigen::MatrixXd power_critic_inputs(const Eigen::MatrixXd& clips, const dsp::StftParams& params) {
  const int bins = params.num_bins();
  const int frames = params.num_frames(clips.rows());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(bins) * frames, clips.cols());
  for (Eigen::Index b = 0; b < clips.cols(); ++b) {
    out.col(b) = dsp::normalize_for_critic(dsp::log_power_spectrogram(clips.col(b), params)).values().reshaped();
  }
  return out;
}

Eigen::MatrixXd power_critic_inputs_vjp(const Eigen::MatrixXd& clips, const Eigen::MatrixXd& grad_inputs,
                                        const dsp::StftParams& params) {
  const int bins = params.num_bins();
  const int frames = params.num_frames(clips.rows());
  if (grad_inputs.rows() != static_cast<Eigen::Index>(bins) * frames || grad_inputs.cols() != clips.cols()) {
    throw ShapeError("power_critic_inputs_vjp: gradient shape mismatch");
  }
  Eigen::MatrixXd out(clips.rows(), clips.cols());
  for (Eigen::Index b = 0; b < clips.cols(); ++b) {
    const Eigen::MatrixXd logspec = dsp::log_power_spectrogram(clips.col(b), params);
    const Eigen::MatrixXd g_log =
        dsp::normalize_for_critic_vjp(logspec, grad_inputs.col(b).reshaped(bins, frames));
    out.col(b) = dsp::log_power_spectrogram_vjp(clips.col(b), params, dsp::kDefaultLogFloor, g_log);
  }
  return out;
}

double total_generator_loss(const LossWeights& weights, const GeneratorLossParts& parts,
                            const LossToggles& toggles) {
  double total = 0.0;
  if (toggles.adversarial()) total += weights.alpha_adv * parts.adversarial;
  if (toggles.pase) total += weights.alpha_pase * parts.pase;
  if (toggles.power) total += weights.alpha_power * parts.power;
  if (toggles.mfcc) total += weights.alpha_mfcc * parts.mfcc;
  return total;
}

}  // namespace v2s::losses
