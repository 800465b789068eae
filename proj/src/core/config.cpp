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

#include "v2s/core/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "v2s/core/error.hpp"

namespace v2s {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
  size_t pos = 0;
  double out = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return out;
}

long long parse_int(const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument(v);
  return out;
}

std::uint64_t parse_u64(const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument(v);
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument(v);
}

struct Field {
  std::function<std::string(const TrainConfig&)> get;
  std::function<void(TrainConfig&, const std::string&)> set;
};

#define V2S_DOUBLE(name, member)                                          \
  {name, {[](const TrainConfig& c) { return format_double(c.member); }, \
          [](TrainConfig& c, const std::string& v) { c.member = parse_double(v); }}}
#define V2S_INT(name, member)                                                 \
  {name, {[](const TrainConfig& c) { return std::to_string(c.member); },    \
          [](TrainConfig& c, const std::string& v) {                        \
            c.member = static_cast<decltype(c.member)>(parse_int(v));       \
          }}}
#define V2S_U64(name, member)                                              \
  {name, {[](const TrainConfig& c) { return std::to_string(c.member); }, \
          [](TrainConfig& c, const std::string& v) { c.member = parse_u64(v); }}}
#define V2S_BOOL(name, member)                                                         \
  {name, {[](const TrainConfig& c) { return std::string(c.member ? "true" : "false"); }, \
          [](TrainConfig& c, const std::string& v) { c.member = parse_bool(v); }}}

// Ordered map: serialization order is alphabetical and therefore stable.
const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      V2S_DOUBLE("learning_rate", learning_rate),
      V2S_DOUBLE("adam_beta1", adam_beta1),
      V2S_DOUBLE("adam_beta2", adam_beta2),
      V2S_INT("critic_steps_per_gen_step", critic_steps_per_gen_step),
      V2S_DOUBLE("clip_seconds", clip_seconds),
      V2S_INT("batch_size", batch_size),
      V2S_INT("total_gen_steps", total_gen_steps),
      V2S_U64("seed", seed),
      V2S_BOOL("enable_wave_critic", enable_wave_critic),
      V2S_BOOL("enable_power_critic", enable_power_critic),
      V2S_BOOL("enable_pase_loss", enable_pase_loss),
      V2S_BOOL("enable_power_loss", enable_power_loss),
      V2S_BOOL("enable_mfcc_loss", enable_mfcc_loss),
      V2S_DOUBLE("model_width_scale", model_width_scale),
      V2S_DOUBLE("alpha_adv", weights.alpha_adv),
      V2S_DOUBLE("alpha_pase", weights.alpha_pase),
      V2S_DOUBLE("alpha_power", weights.alpha_power),
      V2S_DOUBLE("alpha_mfcc", weights.alpha_mfcc),
      V2S_DOUBLE("gp_lambda", weights.gp_lambda),
      V2S_INT("sample_rate", sample_rate),
      V2S_INT("frame_rate", frame_rate),
      V2S_INT("frame_height", frame_height),
      V2S_INT("frame_width", frame_width),
      V2S_BOOL("augment", augment),
      V2S_INT("checkpoint_every", checkpoint_every),
      V2S_U64("pase_seed", pase_seed),
  };
  return table;
}

#undef V2S_DOUBLE
#undef V2S_INT
#undef V2S_U64
#undef V2S_BOOL

}  // namespace

std::vector<std::string> validate_config(const TrainConfig& c) {
  std::vector<std::string> v;
  if (!(c.learning_rate > 0)) v.push_back("learning_rate must be > 0");
  if (!(c.adam_beta1 >= 0 && c.adam_beta1 < 1)) v.push_back("adam_beta1 must be in [0,1)");
  if (!(c.adam_beta2 >= 0 && c.adam_beta2 < 1)) v.push_back("adam_beta2 must be in [0,1)");
  if (c.critic_steps_per_gen_step < 1) v.push_back("critic_steps_per_gen_step must be ≥ 1");
  if (!(c.clip_seconds > 0)) v.push_back("clip_seconds must be > 0");
  if (c.batch_size < 1) v.push_back("batch_size must be ≥ 1");
  if (c.total_gen_steps < 0) v.push_back("total_gen_steps must be ≥ 0");
  if (!(c.model_width_scale > 0 && c.model_width_scale <= 1))
    v.push_back("model_width_scale must be in (0,1]");
  const LossWeights& w = c.weights;
  if (!(w.alpha_adv >= 0)) v.push_back("alpha_adv must be ≥ 0");
  if (!(w.alpha_pase >= 0)) v.push_back("alpha_pase must be ≥ 0");
  if (!(w.alpha_power >= 0)) v.push_back("alpha_power must be ≥ 0");
  if (!(w.alpha_mfcc >= 0)) v.push_back("alpha_mfcc must be ≥ 0");
  if (!(w.gp_lambda >= 0)) v.push_back("gp_lambda must be ≥ 0");
  if (c.sample_rate <= 0) v.push_back("sample_rate must be > 0");
  if (c.frame_rate <= 0) v.push_back("frame_rate must be > 0");
  if (c.sample_rate > 0 && c.frame_rate > 0 && c.sample_rate % c.frame_rate != 0)
    v.push_back("frame_rate must divide sample_rate");
  if (c.frame_height < 16) v.push_back("frame_height must be ≥ 16");
  if (c.frame_width < 16) v.push_back("frame_width must be ≥ 16");
  if (c.checkpoint_every < 0) v.push_back("checkpoint_every must be ≥ 0");
  return v;
}

std::string to_config_text(const TrainConfig& config) {
  std::ostringstream os;
  for (const auto& [key, field] : fields()) os << key << " = " << field.get(config) << '\n';
  return os.str();
}

TrainConfig parse_config(const std::string& text) {
  TrainConfig config;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = fields().find(key);
    if (it == fields().end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key `" + key + "`");
    }
    try {
      it->second.set(config, value);
    } catch (const std::exception&) {
      throw ConfigError("config line " + std::to_string(line_no) + ": invalid value `" + value +
                        "` for `" + key + "`");
    }
  }
  return config;
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const TrainConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file " + path);
  out << to_config_text(config);
}

}  // namespace v2s
