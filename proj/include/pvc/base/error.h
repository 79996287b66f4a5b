// Copyright 2026  The prosody-vc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PVC_BASE_ERROR_H_
#define PVC_BASE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pvc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad shapes, out-of-range arguments, violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Missing or unreadable files, failed writes.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Checksum failures, truncated files, unsupported format versions.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or incomplete run configuration. Raised before any compute.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A NaN or Inf surfaced during a forward pass or an optimizer update.
class NumericError : public Error {
 public:
  using Error::Error;
};

void Warn(std::string_view message);

}  // namespace pvc

#endif  // PVC_BASE_ERROR_H_
