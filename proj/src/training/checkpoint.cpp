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

#include "v2s/training/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>

#include "v2s/core/error.hpp"
#include "v2s/data/media.hpp"

namespace v2s::training {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoints are written little-endian");

constexpr char kMagic[4] = {'V', '2', 'S', 'K'};

std::uint64_t fnv1a(const std::uint8_t* p, size_t n) {
  std::uint64_t h = 1469598103934665603ULL;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

class Writer {
 public:
  Writer(const std::string& kind, const TrainConfig& config) {
    bytes_.insert(bytes_.end(), std::begin(kMagic), std::end(kMagic));
    pod(kCheckpointVersion);
    str(kind);
    str(to_config_text(config));
  }

  template <typename T>
  void pod(const T& v) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void str(const std::string& s) {
    pod(static_cast<std::uint64_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  template <typename Scalar>
  void matrix(const nn::Matrix<Scalar>& m) {
    pod(static_cast<std::int64_t>(m.rows()));
    pod(static_cast<std::int64_t>(m.cols()));
    const auto* p = reinterpret_cast<const std::uint8_t*>(m.data());
    bytes_.insert(bytes_.end(), p, p + static_cast<size_t>(m.size()) * sizeof(Scalar));
  }

  void save(const fs::path& path) {
    pod(fnv1a(bytes_.data(), bytes_.size()));
    data::write_file(path.string(), bytes_);
  }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(const fs::path& path, const std::string& kind) : path_(path.string()) {
    if (!fs::is_regular_file(path)) throw IoError("missing checkpoint file " + path_);
    bytes_ = data::read_file(path_);
    if (bytes_.size() < sizeof(kMagic) + sizeof(std::uint32_t) + sizeof(std::uint64_t) ||
        std::memcmp(bytes_.data(), kMagic, sizeof(kMagic)) != 0) {
      fail("not a checkpoint file");
    }
    pos_ = sizeof(kMagic);
    const auto version = pod<std::uint32_t>();
    if (version != kCheckpointVersion) {
      fail("checkpoint format version " + std::to_string(version) + " does not match supported version " +
           std::to_string(kCheckpointVersion));
    }
    const size_t body = bytes_.size() - sizeof(std::uint64_t);
    std::uint64_t stored;
    std::memcpy(&stored, bytes_.data() + body, sizeof stored);
    if (stored != fnv1a(bytes_.data(), body)) fail("integrity check failed (truncated or corrupt file)");
    end_ = body;
    if (str() != kind) fail("expected a " + kind + " checkpoint");
    config_ = parse_config(str());
  }

  const TrainConfig& config() const { return config_; }

  template <typename T>
  T pod() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint64_t>();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  template <typename Scalar>
  void matrix_into(nn::Matrix<Scalar>& m, const std::string& what) {
    const auto rows = pod<std::int64_t>(), cols = pod<std::int64_t>();
    if (rows != m.rows() || cols != m.cols()) {
      fail(what + " is " + std::to_string(rows) + "x" + std::to_string(cols) + ", expected " +
           std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const size_t n = static_cast<size_t>(m.size()) * sizeof(Scalar);
    need(n);
    std::memcpy(m.data(), bytes_.data() + pos_, n);
    pos_ += n;
  }
  void finish() {
    if (pos_ != end_) fail("trailing bytes");
  }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(path_ + ": " + what); }

 private:
  void need(size_t n) const {
    if (n > end_ - pos_) fail("unexpected end of data");
  }

  std::string path_;
  std::vector<std::uint8_t> bytes_;
  size_t pos_ = 0;
  size_t end_ = 0;
  TrainConfig config_;
};

void write_network(const fs::path& path, const std::string& kind, const TrainConfig& config,
                   const nn::ParameterList<Real>& params, nn::Adam<Real>& opt) {
  Writer w(kind, config);
  w.pod(static_cast<std::uint64_t>(params.size()));
  for (const auto* p : params) {
    w.str(p->name);
    w.pod(static_cast<std::uint8_t>(p->trainable));
    w.matrix(p->value);
  }
  w.pod(static_cast<std::int64_t>(opt.steps()));
  for (size_t i = 0; i < params.size(); ++i) {
    w.matrix(opt.first_moments()[i]);
    w.matrix(opt.second_moments()[i]);
  }
  w.save(path);
}

void read_network(Reader& r, const nn::ParameterList<Real>& params, nn::Adam<Real>* opt) {
  const auto count = r.pod<std::uint64_t>();
  if (count != params.size()) {
    r.fail("holds " + std::to_string(count) + " tensors, expected " + std::to_string(params.size()));
  }
  for (auto* p : params) {
    const std::string name = r.str();
    if (name != p->name) r.fail("tensor \"" + name + "\" found where \"" + p->name + "\" was expected");
    if (static_cast<bool>(r.pod<std::uint8_t>()) != p->trainable) r.fail("trainable flag mismatch for " + name);
    r.matrix_into(p->value, name);
    p->zero_grad();
  }
  const auto steps = r.pod<std::int64_t>();
  if (opt == nullptr) return;
  opt->set_steps(steps);
  for (size_t i = 0; i < params.size(); ++i) {
    r.matrix_into(opt->first_moments()[i], params[i]->name + " first moment");
    r.matrix_into(opt->second_moments()[i], params[i]->name + " second moment");
  }
  r.finish();
}

void write_metrics(Writer& w, const StepMetrics& m) {
  w.pod(m.step);
  w.pod(static_cast<std::uint8_t>(m.phase));
  w.pod(static_cast<std::int32_t>(m.substep));
  w.pod(static_cast<std::int32_t>(m.active_critics));
  for (double v : {m.wave_critic, m.wave_gp, m.power_critic, m.power_gp, m.adversarial, m.pase, m.power, m.mfcc,
                   m.total, m.wall_ms}) {
    w.pod(v);
  }
}

StepMetrics read_metrics(Reader& r) {
  StepMetrics m;
  m.step = r.pod<std::int64_t>();
  const auto phase = r.pod<std::uint8_t>();
  if (phase > 1) r.fail("bad phase in loss history");
  m.phase = static_cast<Phase>(phase);
  m.substep = r.pod<std::int32_t>();
  m.active_critics = r.pod<std::int32_t>();
  for (double* v : {&m.wave_critic, &m.wave_gp, &m.power_critic, &m.power_gp, &m.adversarial, &m.pase, &m.power,
                    &m.mfcc, &m.total, &m.wall_ms}) {
    *v = r.pod<double>();
  }
  return m;
}

void require_same_config(const Reader& r, const TrainConfig& expected) {
  if (!(r.config() == expected)) r.fail("config differs from the other files of the checkpoint");
}

}  // namespace

void save_checkpoint(TrainState& state, const std::string& dir) {
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (!fs::is_directory(root)) throw IoError("cannot create checkpoint directory " + dir);
  write_network(root / "generator.bin", "generator", state.config, state.generator.parameters(), state.generator_opt);
  write_network(root / "wave_critic.bin", "wave_critic", state.config, state.wave_critic.parameters(), state.wave_opt);
  write_network(root / "power_critic.bin", "power_critic", state.config, state.power_critic.parameters(),
                state.power_opt);

  Writer w("trainer", state.config);
  w.pod(state.gen_step);
  w.pod(state.critic_step);
  w.str(state.rng.state());
  w.pod(state.sampler.epoch);
  w.pod(state.sampler.position);
  w.pod(static_cast<std::uint64_t>(state.sampler.order.size()));
  for (std::int64_t i : state.sampler.order) w.pod(i);
  w.pod(static_cast<std::uint64_t>(state.history.rows().size()));
  for (const StepMetrics& m : state.history.rows()) write_metrics(w, m);
  w.save(root / "trainer.bin");
}

std::unique_ptr<TrainState> load_checkpoint(const std::string& dir) {
  const fs::path root(dir);
  Reader trainer(root / "trainer.bin", "trainer");
  auto state = std::make_unique<TrainState>(trainer.config());
  state->gen_step = trainer.pod<std::int64_t>();
  state->critic_step = trainer.pod<std::int64_t>();
  try {
    state->rng.restore(trainer.str());
  } catch (const FormatError& e) {
    trainer.fail(e.what());
  }
  state->sampler.epoch = trainer.pod<std::int64_t>();
  state->sampler.position = trainer.pod<std::int64_t>();
  state->sampler.order.resize(trainer.pod<std::uint64_t>());
  for (auto& i : state->sampler.order) i = trainer.pod<std::int64_t>();
  const auto rows = trainer.pod<std::uint64_t>();
  for (std::uint64_t i = 0; i < rows; ++i) state->history.push(read_metrics(trainer));
  trainer.finish();

  Reader gen(root / "generator.bin", "generator");
  require_same_config(gen, state->config);
  read_network(gen, state->generator.parameters(), &state->generator_opt);
  Reader wave(root / "wave_critic.bin", "wave_critic");
  require_same_config(wave, state->config);
  read_network(wave, state->wave_critic.parameters(), &state->wave_opt);
  Reader power(root / "power_critic.bin", "power_critic");
  require_same_config(power, state->config);
  read_network(power, state->power_critic.parameters(), &state->power_opt);
  return state;
}

LoadedGenerator load_generator(const std::string& dir) {
  Reader r(fs::path(dir) / "generator.bin", "generator");
  LoadedGenerator out;
  out.config = r.config();
  Rng rng(0);
  out.generator = std::make_unique<model::Generator<Real>>(generator_config(out.config), rng);
  read_network(r, out.generator->parameters(), nullptr);
  return out;
}

}  // namespace v2s::training
