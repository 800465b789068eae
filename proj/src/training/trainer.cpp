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

#include "v2s/training/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "v2s/core/error.hpp"
#include "v2s/data/augment.hpp"
#include "v2s/data/media.hpp"
#include "v2s/losses/losses.hpp"
#include "v2s/training/checkpoint.hpp"

namespace v2s::training {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_finite(double value, const char* term, Phase phase, std::int64_t step) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "non-finite " << term << " (" << value << ") at "
       << (phase == Phase::kCritic ? "critic" : "generator") << " update of step " << step;
    throw NumericError(os.str());
  }
}

/// Per-column window starts and the aligned windows of every given matrix.
struct Windows {
  std::vector<Eigen::Index> starts;
  Eigen::Index length = 0;

  Eigen::MatrixXd cut(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd out(length, x.cols());
    for (Eigen::Index b = 0; b < x.cols(); ++b) {
      out.col(b) = data::cut_window(x.col(b), starts[static_cast<size_t>(b)], length);
    }
    return out;
  }

  /// Adds a window gradient back onto full-length columns; padding drops out.
  void scatter_add(const Eigen::MatrixXd& grad, Eigen::MatrixXd& full) const {
    for (Eigen::Index b = 0; b < full.cols(); ++b) {
      const Eigen::Index s = starts[static_cast<size_t>(b)];
      const Eigen::Index n = std::min(length, full.rows() - s);
      if (n > 0) full.col(b).segment(s, n) += grad.col(b).head(n);
    }
  }
};

Windows draw_windows(TrainState& state, Eigen::Index total_length, Eigen::Index batch) {
  Windows w;
  w.length = state.wave_critic.input_length();
  for (Eigen::Index b = 0; b < batch; ++b) {
    w.starts.push_back(data::random_window_start(total_length, w.length, state.rng));
  }
  return w;
}

dsp::StftParams stft_params(const TrainConfig& config) {
  dsp::StftParams p;
  p.sample_rate = config.sample_rate;
  return p;
}

dsp::MfccParams mfcc_params(const TrainConfig& config) {
  dsp::MfccParams p;
  p.stft = stft_params(config);
  p.mel_fmax = std::min(p.mel_fmax, config.sample_rate / 2.0);
  return p;
}

void shuffle(std::vector<std::int64_t>& order, Rng& rng) {
  for (size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* phase_name(Phase p) { return p == Phase::kCritic ? "critic" : "generator"; }

/// metrics.csv and timing.csv, appended row by row and flushed each time.
class MetricsLog {
 public:
  MetricsLog(const fs::path& dir, bool append) {
    const fs::path metrics = dir / "metrics.csv", timing = dir / "timing.csv";
    const bool fresh = !append || !fs::exists(metrics);
    const auto mode = fresh ? std::ios::trunc : std::ios::app;
    metrics_.open(metrics, std::ios::out | mode);
    timing_.open(timing, std::ios::out | (fresh ? std::ios::trunc : std::ios::app));
    if (!metrics_ || !timing_) throw IoError("cannot write metrics in " + dir.string());
    if (fresh) {
      metrics_ << metrics_header() << '\n';
      timing_ << "step,phase,substep,wall_ms\n";
    }
    path_ = metrics.string();
  }

  void write(const StepMetrics& m) {
    metrics_ << metrics_row(m) << '\n';
    timing_ << m.step << ',' << phase_name(m.phase) << ',' << m.substep << ',' << format_value(m.wall_ms) << '\n';
    metrics_.flush();
    timing_.flush();
    if (!metrics_ || !timing_) throw IoError("cannot append to " + path_);
  }

  const std::string& path() const { return path_; }

 private:
  std::ofstream metrics_, timing_;
  std::string path_;
};

void require_resumable(const TrainConfig& saved, const TrainConfig& requested) {
  TrainConfig a = saved, b = requested;
  a.total_gen_steps = b.total_gen_steps;
  a.checkpoint_every = b.checkpoint_every;
  if (!(a == b)) {
    throw ConfigError("resume config differs from the checkpoint's beyond total_gen_steps and checkpoint_every");
  }
}

}  // namespace

std::vector<Example> load_examples(const std::vector<data::ManifestRecord>& records, const TrainConfig& config) {
  const int spf = samples_per_frame(config.sample_rate, config.frame_rate);
  std::vector<Example> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    VideoClip video = data::load_video(r.video_path, config.frame_rate);
    if (video.height() != config.frame_height || video.width() != config.frame_width) {
      throw ShapeError(r.video_path + ": expected " + std::to_string(config.frame_height) + "x" +
                       std::to_string(config.frame_width) + " frames, got " + std::to_string(video.height()) + "x" +
                       std::to_string(video.width()));
    }
    const Waveform audio = data::load_audio(r.audio_path, config.sample_rate);
    const Eigen::Index n = static_cast<Eigen::Index>(video.num_frames()) * spf;
    Eigen::VectorXd samples = data::cut_window(audio.samples(), 0, n);
    out.push_back({r.id, std::move(video), Waveform(std::move(samples), config.sample_rate)});
  }
  return out;
}

std::vector<const VideoClip*> Batch::video_ptrs() const {
  std::vector<const VideoClip*> out;
  for (const auto& v : videos) out.push_back(&v);
  return out;
}

Batch next_batch(TrainState& state, const std::vector<Example>& examples) {
  if (examples.empty()) throw ConfigError("no training examples");
  SamplerState& s = state.sampler;
  std::vector<const Example*> picked;
  while (static_cast<int>(picked.size()) < state.config.batch_size) {
    if (s.epoch < 0 || s.position >= static_cast<std::int64_t>(s.order.size())) {
      s.order.resize(examples.size());
      for (size_t i = 0; i < examples.size(); ++i) s.order[i] = static_cast<std::int64_t>(i);
      shuffle(s.order, state.rng);
      ++s.epoch;
      s.position = 0;
    }
    picked.push_back(&examples.at(static_cast<size_t>(s.order[static_cast<size_t>(s.position++)])));
  }
  int frames = picked.front()->video.num_frames();
  for (const Example* e : picked) frames = std::min(frames, e->video.num_frames());
  const int spf = samples_per_frame(state.config.sample_rate, state.config.frame_rate);
  Batch batch;
  batch.audio.resize(static_cast<Eigen::Index>(frames) * spf, static_cast<Eigen::Index>(picked.size()));
  for (size_t b = 0; b < picked.size(); ++b) {
    const VideoClip& v = picked[b]->video;
    VideoClip cut = frames == v.num_frames()
                        ? v
                        : VideoClip(std::vector<Frame>(v.frames().begin(), v.frames().begin() + frames), v.frame_rate());
    batch.videos.push_back(state.config.augment ? data::augment(cut, state.rng) : std::move(cut));
    batch.audio.col(static_cast<Eigen::Index>(b)) = picked[b]->audio.samples().head(batch.audio.rows());
  }
  return batch;
}

Eigen::MatrixXd generate_batch(TrainState& state, const Batch& batch) {
  Eigen::MatrixXd fake = state.generator.forward(batch.video_ptrs(), nn::Mode::kForward).cast<double>();
  if (!fake.allFinite()) require_finite(NAN, "generator output for the critic", Phase::kCritic, state.gen_step + 1);
  return fake;
}

StepMetrics critic_update(TrainState& state, const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake) {
  if (real.rows() != fake.rows() || real.cols() != fake.cols() || real.cols() == 0) {
    throw ShapeError("critic_update: real and fake batches must have equal nonzero shapes");
  }
  const auto start = Clock::now();
  StepMetrics m;
  m.phase = Phase::kCritic;
  m.step = state.gen_step + 1;
  const TrainConfig& c = state.config;
  const double lambda = c.weights.gp_lambda;
  if (c.enable_wave_critic || c.enable_power_critic) {
    const Windows w = draw_windows(state, real.rows(), real.cols());
    const Eigen::MatrixXd real_w = w.cut(real), fake_w = w.cut(fake);
    if (c.enable_wave_critic) {
      losses::NetworkCritic critic(state.wave_critic);
      state.wave_opt.zero_grad();
      m.wave_critic = losses::critic_loss(critic, real_w, fake_w, true);
      m.wave_gp = losses::gradient_penalty(critic, real_w, fake_w, state.rng, lambda, true);
      require_finite(m.wave_critic, "wave critic loss", m.phase, m.step);
      require_finite(m.wave_gp, "wave critic gradient penalty", m.phase, m.step);
      state.wave_opt.step();
      ++m.active_critics;
    }
    if (c.enable_power_critic) {
      const dsp::StftParams stft = stft_params(c);
      const Eigen::MatrixXd real_s = losses::power_critic_inputs(real_w, stft);
      const Eigen::MatrixXd fake_s = losses::power_critic_inputs(fake_w, stft);
      losses::NetworkCritic critic(state.power_critic);
      state.power_opt.zero_grad();
      m.power_critic = losses::critic_loss(critic, real_s, fake_s, true);
      m.power_gp = losses::gradient_penalty(critic, real_s, fake_s, state.rng, lambda, true);
      require_finite(m.power_critic, "power critic loss", m.phase, m.step);
      require_finite(m.power_gp, "power critic gradient penalty", m.phase, m.step);
      state.power_opt.step();
      ++m.active_critics;
    }
  }
  m.total = m.wave_critic + m.wave_gp + m.power_critic + m.power_gp;
  ++state.critic_step;
  m.wall_ms = elapsed_ms(start);
  state.history.push(m);
  return m;
}

StepMetrics generator_update(TrainState& state, const Batch& batch) {
  const auto start = Clock::now();
  const TrainConfig& c = state.config;
  const losses::LossToggles toggles = loss_toggles(c);
  StepMetrics m;
  m.phase = Phase::kGenerator;
  m.step = state.gen_step + 1;

  const Eigen::MatrixXd fake = state.generator.forward(batch.video_ptrs(), nn::Mode::kTrain).cast<double>();
  if (!fake.allFinite()) require_finite(NAN, "generator output", m.phase, m.step);
  const Eigen::MatrixXd& real = batch.audio;
  if (fake.rows() != real.rows() || fake.cols() != real.cols()) {
    throw ShapeError("generator output and reference audio differ in shape");
  }
  const Eigen::Index batch_size = fake.cols();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(fake.rows(), batch_size);

  if (toggles.adversarial()) {
    const Windows w = draw_windows(state, fake.rows(), batch_size);
    const Eigen::MatrixXd fake_w = w.cut(fake);
    Eigen::MatrixXd grad_w = Eigen::MatrixXd::Zero(fake_w.rows(), batch_size);
    if (c.enable_wave_critic) {
      losses::NetworkCritic critic(state.wave_critic);
      const losses::AdversarialTerm t = losses::adversarial_term(critic, fake_w);
      m.adversarial += t.value;
      grad_w += t.input_gradient;
    }
    if (c.enable_power_critic) {
      const dsp::StftParams stft = stft_params(c);
      losses::NetworkCritic critic(state.power_critic);
      const losses::AdversarialTerm t = losses::adversarial_term(critic, losses::power_critic_inputs(fake_w, stft));
      m.adversarial += t.value;
      grad_w += losses::power_critic_inputs_vjp(fake_w, t.input_gradient, stft);
    }
    require_finite(m.adversarial, "adversarial loss", m.phase, m.step);
    w.scatter_add(c.weights.alpha_adv * grad_w, grad);
  }

  const double inv_b = 1.0 / static_cast<double>(batch_size);
  const dsp::StftParams stft = stft_params(c);
  const dsp::MfccParams mfcc = mfcc_params(c);
  for (Eigen::Index b = 0; b < batch_size; ++b) {
    const Eigen::VectorXd x = real.col(b), y = fake.col(b);
    if (toggles.pase) {
      const losses::LossWithGradient r = losses::pase_loss_and_grad(state.extractor(), x, y);
      m.pase += r.value * inv_b;
      grad.col(b) += c.weights.alpha_pase * inv_b * r.gradient;
    }
    if (toggles.power) {
      const losses::LossWithGradient r = losses::power_loss_and_grad(x, y, stft);
      m.power += r.value * inv_b;
      grad.col(b) += c.weights.alpha_power * inv_b * r.gradient;
    }
    if (toggles.mfcc) {
      const losses::LossWithGradient r = losses::mfcc_loss_and_grad(x, y, mfcc);
      m.mfcc += r.value * inv_b;
      grad.col(b) += c.weights.alpha_mfcc * inv_b * r.gradient;
    }
  }
  require_finite(m.pase, "pase loss", m.phase, m.step);
  require_finite(m.power, "power loss", m.phase, m.step);
  require_finite(m.mfcc, "mfcc loss", m.phase, m.step);
  m.total = losses::total_generator_loss(c.weights, {m.adversarial, m.pase, m.power, m.mfcc}, toggles);
  require_finite(m.total, "total loss", m.phase, m.step);
  m.active_critics = static_cast<int>(c.enable_wave_critic) + static_cast<int>(c.enable_power_critic);

  state.generator_opt.zero_grad();
  state.generator.backward(grad.cast<Real>());
  state.generator_opt.step();
  ++state.gen_step;
  m.wall_ms = elapsed_ms(start);
  state.history.push(m);
  return m;
}

TrainResult train(const TrainConfig& config, const std::string& manifest_path, const TrainOptions& options) {
  if (const auto errors = validate_config(config); !errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  const auto records = data::filter_split(data::load_manifest(manifest_path), data::Split::kTrain);
  if (records.empty()) throw ConfigError(manifest_path + ": manifest has no train records");
  const std::vector<Example> examples = load_examples(records, config);

  std::unique_ptr<TrainState> state;
  if (options.resume_from.empty()) {
    state = std::make_unique<TrainState>(config);
  } else {
    state = load_checkpoint(options.resume_from);
    require_resumable(state->config, config);
    state->config.total_gen_steps = config.total_gen_steps;
    state->config.checkpoint_every = config.checkpoint_every;
  }

  const fs::path out(options.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (!fs::is_directory(out)) throw IoError("cannot create output directory " + options.out_dir);
  MetricsLog log(out, !options.resume_from.empty());
  auto emit = [&](const StepMetrics& m) {
    log.write(m);
    if (options.on_step) options.on_step(m);
  };

  const TrainConfig& c = state->config;
  const bool any_critic = c.enable_wave_critic || c.enable_power_critic;
  while (state->gen_step < c.total_gen_steps) {
    for (int k = 0; k < c.critic_steps_per_gen_step; ++k) {
      StepMetrics m;
      if (any_critic) {
        const Batch batch = next_batch(*state, examples);
        const Eigen::MatrixXd fake = generate_batch(*state, batch);
        m = critic_update(*state, batch.audio, fake);
      } else {
        m = critic_update(*state, Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1));
      }
      m.substep = k;
      emit(m);
    }
    const Batch batch = next_batch(*state, examples);
    emit(generator_update(*state, batch));
    if (c.checkpoint_every > 0 && state->gen_step % c.checkpoint_every == 0 && state->gen_step < c.total_gen_steps) {
      char name[32];
      std::snprintf(name, sizeof name, "step_%06lld", static_cast<long long>(state->gen_step));
      save_checkpoint(*state, (out / "checkpoints" / name).string());
    }
  }
  const std::string final_dir = (out / "checkpoint").string();
  save_checkpoint(*state, final_dir);
  return {final_dir, log.path(), state->gen_step, state->critic_step};
}

Waveform synthesize(model::Generator<Real>& generator, const TrainConfig& config, const VideoClip& clip) {
  return model::generate(generator, config.augment ? data::center_crop(clip) : clip, config.sample_rate);
}

std::string metrics_header() {
  return "step,phase,substep,active_critics,wave_critic,wave_gp,power_critic,power_gp,adversarial,pase,power,mfcc,"
         "total";
}

std::string metrics_row(const StepMetrics& m) {
  std::string row = std::to_string(m.step) + ',' + phase_name(m.phase) + ',' + std::to_string(m.substep) + ',' +
                    std::to_string(m.active_critics);
  for (double v : {m.wave_critic, m.wave_gp, m.power_critic, m.power_gp, m.adversarial, m.pase, m.power, m.mfcc,
                   m.total}) {
    row += ',' + format_value(v);
  }
  return row;
}

}  // namespace v2s::training
