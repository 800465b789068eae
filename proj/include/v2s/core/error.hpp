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

#ifndef V2S_CORE_ERROR_HPP_
#define V2S_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace v2s {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value or inconsistent parameter combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Tensor, clip or signal with an unexpected shape or length.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or subprocess failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Value outside the domain of a type invariant (e.g. samples outside [-1,1]).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A gradient was requested from a function that does not provide one.
class DifferentiationError : public Error {
 public:
  using Error::Error;
};

/// A training quantity became NaN or infinite.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace v2s

#endif  // V2S_CORE_ERROR_HPP_
