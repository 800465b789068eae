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

#ifndef V2S_LOSSES_LOSSES_HPP_
#define V2S_LOSSES_LOSSES_HPP_

#include <Eigen/Dense>

#include "v2s/core/rng.hpp"
#include "v2s/core/types.hpp"
#include "v2s/dsp/mel.hpp"
#include "v2s/losses/critic.hpp"
#include "v2s/losses/perceptual.hpp"

namespace v2s::losses {

/// A scalar objective and its gradient w.r.t. one operand.
struct LossWithGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// mean D(fake) - mean D(real). With accumulate_param_grads the critic's
/// parameter gradients of that quantity are added to its gradient buffers.
double critic_loss(Critic& critic, const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake,
                   bool accumulate_param_grads = false);

/// eps * real + (1 - eps) * fake, one eps ~ U[0,1] per column.
struct InterpolatedSample {
  Eigen::MatrixXd x_hat;
  Eigen::VectorXd epsilon;
};

InterpolatedSample interpolate(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake, Rng& rng);

/// lambda * mean_b (||grad D(x_hat_b)|| - 1)^2 over interpolates of the
/// paired columns. Parameter gradients are exact for piecewise-linear
/// critics (computed through Critic::tangent).
double gradient_penalty(Critic& critic, const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake,
                        Rng& rng, double lambda, bool accumulate_param_grads = false);

/// Penalty at given interpolates; the sampling-free core of gradient_penalty.
double gradient_penalty_at(Critic& critic, const Eigen::MatrixXd& x_hat, double lambda,
                           bool accumulate_param_grads);

/// -mean D(fake) and its gradient w.r.t. the fake batch.
struct AdversarialTerm {
  double value = 0.0;
  Eigen::MatrixXd input_gradient;
};
AdversarialTerm adversarial_term(Critic& critic, const Eigen::MatrixXd& fake);

/// -mean D_wave(fake clips) - mean D_power(fake spectrograms).
double generator_adversarial_loss(Critic& wave, Critic& power, const Eigen::MatrixXd& fake_clips,
                                  const Eigen::MatrixXd& fake_specs);

/// Mean absolute difference of perceptual features.
double pase_loss(PerceptualExtractor& extractor, const Waveform& x, const Waveform& x_tilde);
LossWithGradient pase_loss_and_grad(PerceptualExtractor& extractor, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& x_tilde);

/// Mean absolute difference of log-power spectrograms.
double power_loss(const Waveform& x, const Waveform& x_tilde);
LossWithGradient power_loss_and_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& x_tilde,
                                     const dsp::StftParams& params = {});

/// Mean absolute difference of MFCC matrices.
double mfcc_loss(const Waveform& x, const Waveform& x_tilde);
LossWithGradient mfcc_loss_and_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& x_tilde,
                                    const dsp::MfccParams& params = {});

/// Power-critic input for a batch of clips (one per column), F*L x B, plus
/// the matching input gradient map back to the clips.
Eigen::MatrixXd power_critic_inputs(const Eigen::MatrixXd& clips, const dsp::StftParams& params = {});
Eigen::MatrixXd power_critic_inputs_vjp(const Eigen::MatrixXd& clips, const Eigen::MatrixXd& grad_inputs,
                                        const dsp::StftParams& params = {});

struct GeneratorLossParts {
  double adversarial = 0.0;
  double pase = 0.0;
  double power = 0.0;
  double mfcc = 0.0;
};

/// Which terms participate; disabled terms contribute exactly zero. The
/// adversarial term is active when either critic is enabled.
struct LossToggles {
  bool wave_critic = true;
  bool power_critic = true;
  bool pase = true;
  bool power = true;
  bool mfcc = true;
  bool adversarial() const { return wave_critic || power_critic; }
};

double total_generator_loss(const LossWeights& weights, const GeneratorLossParts& parts,
                            const LossToggles& toggles = {});

}  // namespace v2s::losses

#endif  // V2S_LOSSES_LOSSES_HPP_
