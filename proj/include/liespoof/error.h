// Copyright 2026 The LieSpoof Authors
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

#ifndef LIESPOOF_ERROR_H_
#define LIESPOOF_ERROR_H_

#include <stdexcept>
#include <string>

namespace liespoof {

enum class ErrorKind {
  kDimensionMismatch,
  kOffSpan,          // matrix is not in the span of the generators
  kCutLocus,         // log requested outside the injectivity radius
  kInvalidElement,   // matrix is not in the group's matrix variety
  kChartInversion,   // sensor tuple inconsistent with any group element
  kPrecondition,
  kInvalidArgument,
  kConfig,
};

const char* ToString(ErrorKind kind);

// Single exception type for the library. Callers that need to branch on the
// failure class (the CLI maps kinds to exit codes) inspect kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace liespoof

#endif  // LIESPOOF_ERROR_H_
