// Copyright 2026 The pkddi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pkddi {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input. `line` is 1-based; `byte_offset` is the offset of the
// start of the offending record or line. Either may be unknown (-1).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int64_t line, int64_t byte_offset = -1);

  int64_t line() const { return line_; }
  int64_t byte_offset() const { return byte_offset_; }

 private:
  int64_t line_;
  int64_t byte_offset_;
};

// A numerical routine could not produce a result (singular system, rank too
// small for the requested decomposition, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Invalid argument or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pkddi
