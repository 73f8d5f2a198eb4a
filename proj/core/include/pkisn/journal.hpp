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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "pkisn/bytes.hpp"

namespace pkisn {

enum class JournalRecord : std::uint8_t {
  Genesis = 0,
  SubmitChain = 1,
  SubmitRevocation = 2,
  SubmitTcrl = 3,
  Update = 4,
};

/// Append-only record file: type(1) | len(4) | payload | check(4),
/// where check is the first four bytes of SHA-256(type | payload). Every
/// append is flushed and fsync'd before returning. A torn trailing record is
/// discarded on load.
class Journal {
 public:
  struct Record {
    JournalRecord type;
    Bytes payload;
  };

  explicit Journal(std::filesystem::path path);
  ~Journal();
  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  /// Reads all intact records and truncates any torn tail.
  static std::vector<Record> load(const std::filesystem::path& path);

  void append(JournalRecord type, ByteView payload);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

}  // namespace pkisn
