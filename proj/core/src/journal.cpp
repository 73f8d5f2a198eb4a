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

#include "pkisn/journal.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "pkisn/crypto.hpp"

namespace pkisn {
namespace {

std::array<std::uint8_t, 4> check_bytes(JournalRecord type, ByteView payload) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(type)).raw(payload);
  Digest d = sha256(w.bytes());
  return {d.bytes[0], d.bytes[1], d.bytes[2], d.bytes[3]};
}

[[noreturn]] void io_fail(const std::string& what) {
  throw Error(ErrorCode::Io, what + ": " + std::strerror(errno));
}

}  // namespace

Journal::Journal(std::filesystem::path path) : path_(std::move(path)) {
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) io_fail("open " + path_.string());
}

Journal::~Journal() {
  if (fd_ >= 0) ::close(fd_);
}

void Journal::append(JournalRecord type, ByteView payload) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(type)).var(payload).raw(check_bytes(type, payload));
  const Bytes& rec = w.bytes();
  std::size_t off = 0;
  while (off < rec.size()) {
    ssize_t n = ::write(fd_, rec.data() + off, rec.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_fail("write " + path_.string());
    }
    off += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) io_fail("fsync " + path_.string());
}

std::vector<Journal::Record> Journal::load(const std::filesystem::path& path) {
  std::vector<Record> out;
  if (!std::filesystem::exists(path)) return out;

  std::ifstream in(path, std::ios::binary);
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t good = 0;
  while (good < data.size()) {
    ByteReader r(ByteView(data).subspan(good));
    if (r.remaining() < 5) break;
    const auto type = static_cast<JournalRecord>(r.u8());
    const std::uint32_t len = r.u32();
    if (r.remaining() < static_cast<std::size_t>(len) + 4) break;  // torn tail
    ByteView payload = r.raw(len);
    ByteView check = r.raw(4);
    const auto expect = check_bytes(type, payload);
    if (!std::equal(check.begin(), check.end(), expect.begin())) {
      throw Error(ErrorCode::CorruptJournal, "checksum mismatch at offset " + std::to_string(good));
    }
    if (static_cast<std::uint8_t>(type) > static_cast<std::uint8_t>(JournalRecord::Update)) {
      throw Error(ErrorCode::CorruptJournal, "unknown record type at offset " + std::to_string(good));
    }
    out.push_back(Record{type, Bytes(payload.begin(), payload.end())});
    good += 1 + 4 + len + 4;
  }
  if (good < data.size()) std::filesystem::resize_file(path, good);
  return out;
}

}  // namespace pkisn
