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

#ifndef V2S_DATA_PREPROCESS_HPP_
#define V2S_DATA_PREPROCESS_HPP_

#include <string>

#include "v2s/core/types.hpp"

namespace v2s::data {

/// Runs an external mouth-ROI extraction command and loads its output.
/// `{in}` in the template becomes the raw video path and `{out}` a fresh
/// container path. Throws IoError carrying the tool's output on a nonzero
/// exit, and FormatError when the output is not a V2SF container of
/// frame_size x frame_size frames.
VideoClip preprocess_adapter(const std::string& command_template, const std::string& raw_video_path,
                             int frame_size = kDefaultFrameSize);

}  // namespace v2s::data

#endif  // V2S_DATA_PREPROCESS_HPP_
