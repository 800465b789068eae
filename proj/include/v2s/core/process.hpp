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

#ifndef V2S_CORE_PROCESS_HPP_
#define V2S_CORE_PROCESS_HPP_

#include <map>
#include <string>

namespace v2s {

struct CommandResult {
  int exit_code = 0;
  /// Interleaved stdout and stderr.
  std::string output;
};

/// Runs a command through /bin/sh, capturing its combined output. Throws
/// IoError only when the shell itself cannot be started.
CommandResult run_command(const std::string& command);

/// Single-quotes a string for /bin/sh.
std::string shell_quote(const std::string& s);

/// Replaces every `{key}` in the template with the shell-quoted value.
/// Throws ConfigError on a placeholder without a value.
std::string expand_command(const std::string& command_template, const std::map<std::string, std::string>& values);

/// Creates a fresh directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "v2s");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace v2s

#endif  // V2S_CORE_PROCESS_HPP_
