// Copyright (c) 2026 The Herd Authors. All Rights Reserved.
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

namespace herd {

// Base class for every error raised by the library. Callers that only care
// about "something went wrong" catch this; the CLI maps subclasses onto exit
// codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (range, non-empty, finite, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Tensor or graph shapes do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A file or wire buffer could not be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace herd
