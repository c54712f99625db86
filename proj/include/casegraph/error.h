// Copyright 2026 The CaseGraph Authors.
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

#ifndef CASEGRAPH_ERROR_H_
#define CASEGRAPH_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace casegraph {

// Broad error categories. The service maps these onto HTTP status codes and
// the CLI onto exit codes, so keep the set small.
enum class ErrorKind {
  kInvalidArgument,  // malformed input: bad syntax, wrong field count
  kSchema,           // well-formed JSON/XML that violates the schema
  kNotFound,
  kAlreadyExists,
  kInconsistent,     // temporal relations contradict each other
  kDanglingReference,
  kValidation,       // well-formed input that breaks a domain invariant
  kIo,
  kChecksum,
  kNetwork,
  kTimeout,
  kHttpStatus,
  kInternal,
};

std::string_view ErrorKindName(ErrorKind kind);

// Structured error carrying a kind, a message and an optional JSON detail
// payload (line numbers, JSON paths, consistency witnesses, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message,
        nlohmann::json detail = nullptr)
      : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

  ErrorKind kind() const { return kind_; }
  const nlohmann::json &detail() const { return detail_; }

 private:
  ErrorKind kind_;
  nlohmann::json detail_;
};

}  // namespace casegraph

#endif  // CASEGRAPH_ERROR_H_
