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

#include "v2s/data/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "v2s/core/error.hpp"

namespace v2s::data {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFields[] = {"id", "video_path", "audio_path", "transcript", "speaker_id", "split"};

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  throw FormatError(path + ":" + std::to_string(line) + ": " + what);
}

std::string resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw FormatError("split must be train, val or test, got \"" + std::string(name) + "\"");
}

std::vector<ManifestRecord> load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path);
  const fs::path base = fs::absolute(fs::path(path)).parent_path();
  std::vector<ManifestRecord> records;
  std::set<std::string> ids;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      fail(path, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) fail(path, line_no, "expected a JSON object");
    for (const char* field : kFields) {
      if (!obj.contains(field)) fail(path, line_no, std::string("missing field \"") + field + "\"");
      if (!obj[field].is_string()) fail(path, line_no, std::string("field \"") + field + "\" must be a string");
    }
    if (obj.size() != std::size(kFields)) {
      for (const auto& [key, value] : obj.items()) {
        if (std::find(std::begin(kFields), std::end(kFields), key) == std::end(kFields)) {
          fail(path, line_no, "unknown field \"" + key + "\"");
        }
      }
    }
    ManifestRecord r;
    r.id = obj["id"].get<std::string>();
    if (r.id.empty()) fail(path, line_no, "empty id");
    if (!ids.insert(r.id).second) fail(path, line_no, "duplicate id \"" + r.id + "\"");
    r.video_path = resolve(base, obj["video_path"].get<std::string>());
    r.audio_path = resolve(base, obj["audio_path"].get<std::string>());
    r.transcript = obj["transcript"].get<std::string>();
    r.speaker_id = obj["speaker_id"].get<std::string>();
    try {
      r.split = parse_split(obj["split"].get<std::string>());
    } catch (const FormatError& e) {
      fail(path, line_no, e.what());
    }
    for (const std::string* p : {&r.video_path, &r.audio_path}) {
      if (!fs::is_regular_file(*p)) fail(path, line_no, "file not found: " + *p);
    }
    records.push_back(std::move(r));
  }
  return records;
}

void save_manifest(const std::vector<ManifestRecord>& records, const std::string& path) {
  std::ostringstream os;
  for (const ManifestRecord& r : records) {
    const nlohmann::json obj = {{"id", r.id},
                                {"video_path", r.video_path},
                                {"audio_path", r.audio_path},
                                {"transcript", r.transcript},
                                {"speaker_id", r.speaker_id},
                                {"split", std::string(split_name(r.split))}};
    os << obj.dump() << '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path);
  out << os.str();
  if (!out) throw IoError("cannot write manifest " + path);
}

std::vector<ManifestRecord> filter_split(const std::vector<ManifestRecord>& records, Split split) {
  std::vector<ManifestRecord> out;
  for (const ManifestRecord& r : records)
    if (r.split == split) out.push_back(r);
  return out;
}

}  // namespace v2s::data
