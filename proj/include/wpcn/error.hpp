// Copyright 2026 The wpcnsim Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wpcn {

enum class ErrorCode {
  kNonSquare,
  kNonHermitian,
  kNonFinite,
  kDomainError,
  kEmptySamples,
  kDimensionMismatch,
  kNonPositiveDistance,
  kInvalidUtility,
  kNonPsdCovariance,
  kInvalidArgument,
  kConfigError,
  kIoError,
  kEmptyTrace,
  kInvariantViolation,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported as wpcn::Error; code() identifies the
// failure class so callers (and tests) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  // message without the code prefix, for re-wrapping
  const char* detail() const noexcept { return what() + to_string(code_).size() + 2; }

 private:
  ErrorCode code_;
};

}  // namespace wpcn
