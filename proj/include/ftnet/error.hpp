// ftnet/error.hpp

// Copyright 2026 The FTNet Authors

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

#ifndef FTNET_ERROR_HPP_
#define FTNET_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ftnet {

/// Error classes. The numeric value doubles as the CLI exit code.
enum class ErrorKind : int {
  kConfig = 2,
  kUsage = 3,
  kShape = 4,
  kFormat = 5,
  kIo = 6,
  kDegenerateInput = 7,
};

inline const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kUsage: return "usage error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kDegenerateInput: return "degenerate input";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string &w) : Error(ErrorKind::kConfig, w) {}
};
struct UsageError : Error {
  explicit UsageError(const std::string &w) : Error(ErrorKind::kUsage, w) {}
};
struct ShapeError : Error {
  explicit ShapeError(const std::string &w) : Error(ErrorKind::kShape, w) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string &w) : Error(ErrorKind::kFormat, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string &w) : Error(ErrorKind::kIo, w) {}
};
struct DegenerateInputError : Error {
  explicit DegenerateInputError(const std::string &w)
      : Error(ErrorKind::kDegenerateInput, w) {}
};

}  // namespace ftnet

#endif  // FTNET_ERROR_HPP_
