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

#ifndef TYPOTRACE_ERROR_H_
#define TYPOTRACE_ERROR_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace typotrace {

enum class ErrorCode {
  kInvalidArgument,
  kUnsupportedCharacter,
  kEmptyString,
  kShapeMismatch,
  kNonFiniteActivation,
  kDegenerateNorm,
  kIoError,
  kFormatError,
  kEmptyNegatives,
  kBankTooSmall,
  kNonFiniteLoss,
  kEmptyDataset,
  kUnknownDomain,
  kNoDomainColumn,
  kEmptyResult,
  kLengthMismatch,
  kEmpty,
  kMisalignment,
  kFingerprintMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception. `index` carries the
// offending position when one exists: the character offset for
// kUnsupportedCharacter, or the item index for batch operations.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> index() const { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

// Re-throws `e` with `context` prepended and `index` attached.
[[noreturn]] void RethrowWithContext(const Error& e, std::string_view context,
                                     std::optional<std::size_t> index);

}  // namespace typotrace

#endif  // TYPOTRACE_ERROR_H_
