// Copyright 2026 The BAAFE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "baafe/error.h"

namespace baafe {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateX: return "DuplicateX";
    case ErrorCode::kWrongCount: return "WrongCount";
    case ErrorCode::kKeyTooLong: return "KeyTooLong";
    case ErrorCode::kMalformedShares: return "MalformedShares";
    case ErrorCode::kInvalidKey: return "InvalidKey";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingAttribute: return "MissingAttribute";
    case ErrorCode::kGapError: return "GapError";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kEmptyHistory: return "EmptyHistory";
    case ErrorCode::kDegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kGeneratorDrift: return "GeneratorDrift";
    case ErrorCode::kNonPositive: return "NonPositive";
    case ErrorCode::kZeroSpread: return "ZeroSpread";
    case ErrorCode::kInvalidCalibration: return "InvalidCalibration";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kTooFewDistinctCodes: return "TooFewDistinctCodes";
    case ErrorCode::kChaffSpaceExhausted: return "ChaffSpaceExhausted";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kUnknownApp: return "UnknownApp";
    case ErrorCode::kDuplicate: return "Duplicate";
    case ErrorCode::kEnrollFailed: return "EnrollFailed";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kBindError: return "BindError";
    case ErrorCode::kStoreCorrupt: return "StoreCorrupt";
    case ErrorCode::kAuthFailed: return "AuthFailed";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

std::optional<ErrorCode> ErrorCodeFromName(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kIo); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (ErrorCodeName(code) == name) return code;
  }
  return std::nullopt;
}

}  // namespace baafe
