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

#include "v2s/core/process.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>

#include "v2s/core/error.hpp"

namespace v2s {

CommandResult run_command(const std::string& command) {
  const std::string wrapped = "(" + command + ") 2>&1";
  auto closer = [](FILE* f) { return pclose(f); };
  std::unique_ptr<FILE, decltype(closer)> pipe(popen(wrapped.c_str(), "r"), closer);
  if (!pipe) throw IoError("cannot start command: " + command);
  CommandResult result;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) result.output.append(buf.data(), n);
  const int status = pclose(pipe.release());
  if (status == -1) throw IoError("cannot collect status of command: " + command);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  return result;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string expand_command(const std::string& command_template, const std::map<std::string, std::string>& values) {
  std::string out;
  size_t i = 0;
  while (i < command_template.size()) {
    const size_t open = command_template.find('{', i);
    if (open == std::string::npos) {
      out.append(command_template, i, std::string::npos);
      break;
    }
    const size_t close = command_template.find('}', open);
    if (close == std::string::npos) {
      out.append(command_template, i, std::string::npos);
      break;
    }
    out.append(command_template, i, open - i);
    const std::string key = command_template.substr(open + 1, close - open - 1);
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("command template has no value for {" + key + "}");
    out += shell_quote(it->second);
    i = close + 1;
  }
  return out;
}

TempDir::TempDir(const std::string& prefix) {
  std::string pattern = (std::filesystem::temp_directory_path() / (prefix + "-XXXXXX")).string();
  if (mkdtemp(pattern.data()) == nullptr) throw IoError("cannot create temporary directory " + pattern);
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace v2s
