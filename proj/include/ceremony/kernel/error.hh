/*
 * Copyright (c) 2026, The Ceremony Checker Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CEREMONY_KERNEL_ERROR_HH_
#define CEREMONY_KERNEL_ERROR_HH_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ceremony {

enum class ErrorCode {
  kParse,
  kUndeclaredName,
  kDuplicateDeclaration,
  kIndexOutOfRange,
  kTypeMismatch,
  kOutsideUniverse,
  kCapacityExceeded,
  kUnguardedRecursion,
  kStateLimitExceeded,
  kUnboundMacro,
  kTruncatedSystem,
  kUnknownPropertyId,
  kInvalidScenario,
  kNonReplayableTrace,
  kInvalidArgument,
};

std::string_view ToString(ErrorCode code);

/**
 * The single exception type thrown by every module. The code drives the CLI
 * exit status; the message carries the source location when one is known.
 */
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ceremony

#endif /* CEREMONY_KERNEL_ERROR_HH_ */
