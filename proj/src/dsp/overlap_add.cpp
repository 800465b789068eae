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

#include "v2s/dsp/overlap_add.hpp"

#include <string>

namespace v2s::dsp {

Waveform overlap_add(const std::vector<Eigen::VectorXd>& segments, int sample_rate) {
  if (segments.empty()) throw ShapeError("overlap_add needs at least one segment");
  const Eigen::Index len = segments.front().size();
  Eigen::MatrixXd packed(len, static_cast<Eigen::Index>(segments.size()));
  for (size_t t = 0; t < segments.size(); ++t) {
    if (segments[t].size() != len) {
      throw ShapeError("overlap_add: segment " + std::to_string(t) + " has length " +
                       std::to_string(segments[t].size()) + ", expected " + std::to_string(len));
    }
    packed.col(static_cast<Eigen::Index>(t)) = segments[t];
  }
  return Waveform(overlap_add(packed), sample_rate);
}

}  // namespace v2s::dsp
