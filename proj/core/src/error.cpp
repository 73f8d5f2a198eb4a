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

#include "pkisn/error.hpp"

namespace pkisn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnregisteredTag: return "UnregisteredTag";
    case ErrorCode::BadKey: return "BadKey";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::PolicyViolation: return "PolicyViolation";
    case ErrorCode::TimestampAfterExpiry: return "TimestampAfterExpiry";
    case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SizeOutOfRange: return "SizeOutOfRange";
    case ErrorCode::OrphanCertificate: return "OrphanCertificate";
    case ErrorCode::NotFoundAtLevel: return "NotFoundAtLevel";
    case ErrorCode::ActuallyPresent: return "ActuallyPresent";
    case ErrorCode::InvalidChain: return "InvalidChain";
    case ErrorCode::UntrustedRoot: return "UntrustedRoot";
    case ErrorCode::QueueFull: return "QueueFull";
    case ErrorCode::TargetNotLogged: return "TargetNotLogged";
    case ErrorCode::IllegitimateRevocation: return "IllegitimateRevocation";
    case ErrorCode::DuplicateRkRevocation: return "DuplicateRkRevocation";
    case ErrorCode::UpdateTooEarly: return "UpdateTooEarly";
    case ErrorCode::NoSignedRoot: return "NoSignedRoot";
    case ErrorCode::UnknownLeaf: return "UnknownLeaf";
    case ErrorCode::BadVendorSignature: return "BadVendorSignature";
    case ErrorCode::RootMismatch: return "RootMismatch";
    case ErrorCode::InvalidEntry: return "InvalidEntry";
    case ErrorCode::GapInDelta: return "GapInDelta";
    case ErrorCode::UnknownTimestamp: return "UnknownTimestamp";
    case ErrorCode::CorruptJournal: return "CorruptJournal";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Script: return "Script";
  }
  return "Unknown";
}

std::optional<ErrorCode> error_code_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::Script); ++i) {
    if (to_string(static_cast<ErrorCode>(i)) == s) return static_cast<ErrorCode>(i);
  }
  return std::nullopt;
}

}  // namespace pkisn
