// Copyright 2026 The freqgen Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace freqgen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or channel-count mismatch on an input value.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Out-of-range scalar parameter (even kernel size, negative diameter, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Operation applied to an object in the wrong state (layout mismatch, stale cache).
class InvalidState : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

/// Malformed key = value configuration; message carries line/key context.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace freqgen
