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

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

#include "pkisn/bytes.hpp"

namespace pkisn {

/// 32-byte SHA-256 output. Ordering is unsigned big-endian byte order, which
/// is the order RevTree subtrees are sorted in.
struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  static Digest zero() { return {}; }
  static Digest from_hex(std::string_view hex);

  bool is_zero() const;
  std::string hex() const;
  ByteView view() const { return bytes; }

  friend auto operator<=>(const Digest&, const Digest&) = default;
};

/// Plain SHA-256, no domain prefix. Used for key identifiers.
Digest sha256(ByteView data);

/// H(0x00 || entry)
Digest hash_leaf(ByteView entry);
/// H(0x01 || left || right)
Digest hash_node(const Digest& left, const Digest& right);

enum class KeyRole : std::uint8_t {
  StandardCA = 1,
  StandardLeaf = 2,
  RevocationKey = 3,
  VendorKey = 4,
  LogKey = 5,
};

std::string_view to_string(KeyRole role);
KeyRole key_role_from_string(std::string_view s);

/// Domain tags prepended to every signed payload.
namespace tag {
inline constexpr std::uint8_t kLeafRevocation = 0x01;
inline constexpr std::uint8_t kCaRevocation = 0x02;
inline constexpr std::uint8_t kChainCommitment = 0x03;
inline constexpr std::uint8_t kSignedRoot = 0x04;
inline constexpr std::uint8_t kRevocationCommitment = 0x05;
inline constexpr std::uint8_t kTcrlCommitment = 0x06;
inline constexpr std::uint8_t kTcrlBody = 0x07;
inline constexpr std::uint8_t kCertificate = 0x08;

bool registered(std::uint8_t t);
}  // namespace tag

struct PublicKey {
  std::array<std::uint8_t, 32> bytes{};

  /// SHA-256 of the raw key bytes.
  Digest key_id() const;
  ByteView view() const { return bytes; }

  friend auto operator<=>(const PublicKey&, const PublicKey&) = default;
};

struct Signature {
  Digest signer_key_id;
  std::uint8_t payload_tag = 0;
  std::array<std::uint8_t, 64> bytes{};

  void encode(ByteWriter& w) const;
  static Signature decode(ByteReader& r);

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Ed25519 key pair. The secret is the 32-byte seed; libsodium's expanded
/// secret key is derived on demand.
class KeyPair {
 public:
  static KeyPair generate(KeyRole role);
  static KeyPair from_seed(KeyRole role, ByteView seed32);
  /// Deterministic key derived from a label, for fixtures and scenarios.
  static KeyPair derive(KeyRole role, std::string_view label);

  KeyRole role() const { return role_; }
  const PublicKey& public_key() const { return pub_; }
  Digest key_id() const { return pub_.key_id(); }
  const std::array<std::uint8_t, 32>& seed() const { return seed_; }

  Signature sign(std::uint8_t payload_tag, ByteView payload) const;

 private:
  KeyPair(KeyRole role, const std::array<std::uint8_t, 32>& seed);

  KeyRole role_;
  std::array<std::uint8_t, 32> seed_{};
  std::array<std::uint8_t, 64> secret_{};
  PublicKey pub_;
};

inline Signature sign(const KeyPair& key, std::uint8_t payload_tag, ByteView payload) {
  return key.sign(payload_tag, payload);
}

bool verify(const PublicKey& pub, std::uint8_t payload_tag, ByteView payload, const Signature& sig);

}  // namespace pkisn

template <>
struct std::hash<pkisn::Digest> {
  std::size_t operator()(const pkisn::Digest& d) const noexcept {
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | d.bytes[i];
    return h;
  }
};
