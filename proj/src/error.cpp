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

#include "faultfuse/error.hpp"

namespace faultfuse {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidCellValue: return "InvalidCellValue";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kInfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::kTooFewInstances: return "TooFewInstances";
    case ErrorCode::kLexError: return "LexError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNoFailingTests: return "NoFailingTests";
    case ErrorCode::kNoFaults: return "NoFaults";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kEmptyBallots: return "EmptyBallots";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kUntrainedModel: return "UntrainedModel";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string_view module, const std::string& message)
    : std::runtime_error(std::string(module) + ": " +
                         std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      module_(module) {}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
      return 2;
    case ErrorCode::kMissingFile:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kInvalidCellValue:
    case ErrorCode::kDanglingReference:
    case ErrorCode::kLexError:
    case ErrorCode::kParseError:
    case ErrorCode::kIoError:
      return 3;
    case ErrorCode::kNoFailingTests:
    case ErrorCode::kNoFaults:
    case ErrorCode::kDegenerateLabels:
    case ErrorCode::kSingleClass:
    case ErrorCode::kTooFewInstances:
    case ErrorCode::kEmptySelection:
    case ErrorCode::kEmptyBallots:
      return 4;
    case ErrorCode::kInfeasibleSpec:
      return 5;
    default:
      return 1;
  }
}

}  // namespace faultfuse
