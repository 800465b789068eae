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

#include "v2s/data/preprocess.hpp"

#include <filesystem>

#include "v2s/core/error.hpp"
#include "v2s/core/process.hpp"
#include "v2s/data/media.hpp"

namespace v2s::data {

VideoClip preprocess_adapter(const std::string& command_template, const std::string& raw_video_path,
                             int frame_size) {
  const TempDir tmp("v2s-preprocess");
  const std::string out = (std::filesystem::path(tmp.path()) / "roi.v2sf").string();
  const std::string command = expand_command(command_template, {{"in", raw_video_path}, {"out", out}});
  const CommandResult result = run_command(command);
  if (result.exit_code != 0) {
    throw IoError("preprocessing command exited with code " + std::to_string(result.exit_code) +
                  "; output:\n" + result.output);
  }
  VideoClip clip = [&] {
    try {
      return load_video(out);
    } catch (const Error& e) {
      throw FormatError(std::string("preprocessing command produced no valid container: ") + e.what() +
                        "; output:\n" + result.output);
    }
  }();
  if (clip.height() != frame_size || clip.width() != frame_size) {
    throw FormatError("preprocessing output: expected " + std::to_string(frame_size) + "x" +
                      std::to_string(frame_size) + " frames, got " + std::to_string(clip.height()) + "x" +
                      std::to_string(clip.width()));
  }
  return clip;
}

}  // namespace v2s::data
