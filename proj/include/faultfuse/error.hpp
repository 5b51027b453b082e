/*
 * Copyright 2026 The FaultFuse Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAULTFUSE_ERROR_HPP_
#define FAULTFUSE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace faultfuse {

// Every failure surfaced by the library carries one of these codes. The CLI
// maps them onto process exit codes (see ExitCodeFor).
enum class ErrorCode {
  kMissingFile,
  kDimensionMismatch,
  kInvalidCellValue,
  kDanglingReference,
  kInfeasibleSpec,
  kTooFewInstances,
  kLexError,
  kParseError,
  kNoFailingTests,
  kNoFaults,
  kLengthMismatch,
  kEmptySelection,
  kConfigError,
  kEmptyBallots,
  kNonFiniteInput,
  kLabelOutOfRange,
  kShapeMismatch,
  kDegenerateLabels,
  kUntrainedModel,
  kSingleClass,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  // `module` prefixes the message so CLI users can tell which stage failed.
  Error(ErrorCode code, std::string_view module, const std::string& message);

  ErrorCode code() const { return code_; }
  const std::string& module() const { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

// 2 = configuration, 3 = input data/format, 4 = degenerate problem data,
// 5 = infeasible generation, 1 = anything else.
int ExitCodeFor(ErrorCode code);

}  // namespace faultfuse

#endif  // FAULTFUSE_ERROR_HPP_
