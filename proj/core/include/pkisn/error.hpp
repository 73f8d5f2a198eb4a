// Copyright 2026 The PKISN Authors
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

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pkisn {

enum class ErrorCode {
  // crypto-core
  UnregisteredTag,
  BadKey,
  // encodings
  Truncated,
  Malformed,
  // cert-model
  PolicyViolation,
  TimestampAfterExpiry,
  // time-tree
  NonMonotonicTimestamp,
  IndexOutOfRange,
  SizeOutOfRange,
  // rev-tree
  OrphanCertificate,
  NotFoundAtLevel,
  ActuallyPresent,
  // log-core
  InvalidChain,
  UntrustedRoot,
  QueueFull,
  TargetNotLogged,
  IllegitimateRevocation,
  DuplicateRkRevocation,
  UpdateTooEarly,
  NoSignedRoot,
  UnknownLeaf,
  BadVendorSignature,
  // monitor
  RootMismatch,
  InvalidEntry,
  GapInDelta,
  UnknownTimestamp,
  // service / persistence
  CorruptJournal,
  Io,
  Config,
  Script,
};

std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> error_code_from_string(std::string_view s);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pkisn
