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

#ifndef V2S_EVAL_ABLATION_HPP_
#define V2S_EVAL_ABLATION_HPP_

#include <string>
#include <vector>

#include "v2s/core/config.hpp"
#include "v2s/data/manifest.hpp"
#include "v2s/eval/report.hpp"
#include "v2s/training/checkpoint.hpp"

namespace v2s::eval {

/// One ablation row: the components switched off relative to the full model.
struct AblationVariant {
  std::string label;
  std::vector<std::string> removed;
};

/// Toggle names: pase, power, mfcc, wave_critic, power_critic; "l1" stands
/// for pase+power+mfcc. Grid entries are comma separated; '+' joins names
/// removed together. The full model always comes first. Throws ConfigError
/// on an unknown name.
std::vector<AblationVariant> parse_ablation_grid(const std::string& grid);

/// Applies a variant's removals to a config.
TrainConfig apply_variant(const TrainConfig& base, const AblationVariant& variant);

struct AblationRow {
  AblationVariant variant;
  EvalReport report;
};

struct AblationOptions {
  std::string out_dir;
  data::Split eval_split = data::Split::kTest;
  EvalOptions eval;
};

/// Trains and evaluates every variant with the base seed, writing each run
/// under out_dir/<label>/ and the comparison to out_dir/ablation.csv.
std::vector<AblationRow> run_ablation(const TrainConfig& base, const std::string& manifest_path,
                                      const std::vector<AblationVariant>& variants, const AblationOptions& options);

/// Synthesizes hyp_dir/<id>.wav for every record from its video.
void synthesize_records(training::LoadedGenerator& generator, const std::vector<data::ManifestRecord>& records,
                        const std::string& hyp_dir);

std::string ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace v2s::eval

#endif  // V2S_EVAL_ABLATION_HPP_
