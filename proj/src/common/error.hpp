/* Copyright 2026 The mtlqa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#pragma once

#include <stdexcept>
#include <string>

namespace mtlqa {

// Numeric values double as CLI exit codes.
enum class ErrorKind : int {
  kUsage = 2,
  kIntegrity = 3,
  kInvariant = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::kUsage, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::kUsage, w) {}
};

struct IntegrityError : Error {
  explicit IntegrityError(const std::string& w) : Error(ErrorKind::kIntegrity, w) {}
};

struct DataError : Error {
  explicit DataError(const std::string& w) : Error(ErrorKind::kIntegrity, w) {}
};

struct InvariantError : Error {
  explicit InvariantError(const std::string& w) : Error(ErrorKind::kInvariant, w) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& w) : Error(ErrorKind::kInvariant, w) {}
};

struct IndexError : Error {
  explicit IndexError(const std::string& w) : Error(ErrorKind::kInvariant, w) {}
};

struct EncodingError : Error {
  explicit EncodingError(const std::string& w) : Error(ErrorKind::kUsage, w) {}
};

}  // namespace mtlqa
