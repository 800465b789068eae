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

#ifndef V2S_DATA_MANIFEST_HPP_
#define V2S_DATA_MANIFEST_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace v2s::data {

enum class Split { kTrain, kVal, kTest };

std::string_view split_name(Split split);
/// Throws FormatError for anything but "train", "val" or "test".
Split parse_split(std::string_view name);

/// One utterance of a dataset. Paths are absolute after load_manifest.
struct ManifestRecord {
  std::string id;
  std::string video_path;
  std::string audio_path;
  std::string transcript;
  std::string speaker_id;
  Split split = Split::kTrain;

  bool operator==(const ManifestRecord&) const = default;
};

/// Reads newline-delimited JSON, one record per non-blank line with exactly
/// the ManifestRecord fields. Relative paths resolve against the manifest's
/// directory and must exist. Throws FormatError citing the line number on a
/// malformed line, a missing file or a duplicate id; IoError when the
/// manifest itself cannot be read.
std::vector<ManifestRecord> load_manifest(const std::string& path);

/// Writes records as newline-delimited JSON. Paths are written as given.
void save_manifest(const std::vector<ManifestRecord>& records, const std::string& path);

std::vector<ManifestRecord> filter_split(const std::vector<ManifestRecord>& records, Split split);

}  // namespace v2s::data

#endif  // V2S_DATA_MANIFEST_HPP_
