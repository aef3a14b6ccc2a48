// Copyright 2026 The PAZO Authors.
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

#ifndef PAZO_ERRORS_H_
#define PAZO_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pazo {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (empty request, k > d, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A loss, gradient or update became NaN/Inf.
class NumericError : public Error {
 public:
  using Error::Error;
};

// The accountant cannot produce a finite bound, or sigma calibration failed.
class PrivacyError : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-range experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed dataset file.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace pazo

#endif  // PAZO_ERRORS_H_
