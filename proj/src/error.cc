// Copyright 2026 The Typotrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "typotrace/error.h"

namespace typotrace {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnsupportedCharacter: return "UnsupportedCharacter";
    case ErrorCode::kEmptyString: return "EmptyString";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonFiniteActivation: return "NonFiniteActivation";
    case ErrorCode::kDegenerateNorm: return "DegenerateNorm";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kEmptyNegatives: return "EmptyNegatives";
    case ErrorCode::kBankTooSmall: return "BankTooSmall";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kUnknownDomain: return "UnknownDomain";
    case ErrorCode::kNoDomainColumn: return "NoDomainColumn";
    case ErrorCode::kEmptyResult: return "EmptyResult";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kMisalignment: return "Misalignment";
    case ErrorCode::kFingerprintMismatch: return "FingerprintMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      index_(index) {}

void RethrowWithContext(const Error& e, std::string_view context,
                        std::optional<std::size_t> index) {
  std::string what = e.what();
  // Strip the "<Code>: " prefix the constructor adds back.
  const std::string prefix = std::string(ErrorCodeName(e.code())) + ": ";
  if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
  throw Error(e.code(), std::string(context) + ": " + what, index);
}

}  // namespace typotrace
