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

#ifndef BAAFE_ERROR_H_
#define BAAFE_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace baafe {

enum class ErrorCode {
  // ffmath
  kDuplicateX,
  kWrongCount,
  kKeyTooLong,
  kMalformedShares,
  kInvalidKey,
  // behavior
  kParseError,
  kMissingAttribute,
  kGapError,
  kInsufficientData,
  // encoder
  kEmptyHistory,
  kDegenerateMatrix,
  kLengthMismatch,
  kGeneratorDrift,
  // thresholds
  kNonPositive,
  kZeroSpread,
  kInvalidCalibration,
  // vault
  kInvalidParams,
  kTooFewDistinctCodes,
  kChaffSpaceExhausted,
  kVersionMismatch,
  kSchemaError,
  // reconstruct / protocol
  kUnknownApp,
  kDuplicate,
  kEnrollFailed,
  kTransport,
  kBindError,
  kStoreCorrupt,
  kAuthFailed,
  // harness / plumbing
  kInvalidConfig,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);
// Inverse of ErrorCodeName; nullopt for unknown names.
std::optional<ErrorCode> ErrorCodeFromName(std::string_view name);

// All library failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace baafe

#endif  // BAAFE_ERROR_H_
