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

#include "pkisn/crypto.hpp"

#include <sodium.h>

#include <cstring>

namespace pkisn {
namespace {

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error(ErrorCode::BadKey, "libsodium failed to initialize");
}

Digest sha256_parts(std::initializer_list<ByteView> parts) {
  crypto_hash_sha256_state st;
  crypto_hash_sha256_init(&st);
  for (ByteView p : parts) crypto_hash_sha256_update(&st, p.data(), p.size());
  Digest d;
  crypto_hash_sha256_final(&st, d.bytes.data());
  return d;
}

constexpr std::uint8_t kLeafPrefix[1] = {0x00};
constexpr std::uint8_t kNodePrefix[1] = {0x01};

}  // namespace

Digest Digest::from_hex(std::string_view hex) {
  Bytes b = pkisn::from_hex(hex);
  if (b.size() != 32) throw Error(ErrorCode::Malformed, "digest must be 32 bytes");
  Digest d;
  std::memcpy(d.bytes.data(), b.data(), 32);
  return d;
}

bool Digest::is_zero() const {
  for (auto b : bytes)
    if (b != 0) return false;
  return true;
}

std::string Digest::hex() const { return to_hex(bytes); }

Digest sha256(ByteView data) { return sha256_parts({data}); }

Digest hash_leaf(ByteView entry) { return sha256_parts({kLeafPrefix, entry}); }

Digest hash_node(const Digest& left, const Digest& right) {
  return sha256_parts({kNodePrefix, left.bytes, right.bytes});
}

std::string_view to_string(KeyRole role) {
  switch (role) {
    case KeyRole::StandardCA: return "ca";
    case KeyRole::StandardLeaf: return "leaf";
    case KeyRole::RevocationKey: return "revocation";
    case KeyRole::VendorKey: return "vendor";
    case KeyRole::LogKey: return "log";
  }
  return "?";
}

KeyRole key_role_from_string(std::string_view s) {
  for (KeyRole r : {KeyRole::StandardCA, KeyRole::StandardLeaf, KeyRole::RevocationKey,
                    KeyRole::VendorKey, KeyRole::LogKey}) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::Malformed, "unknown key role '" + std::string(s) + "'");
}

bool tag::registered(std::uint8_t t) { return t >= kLeafRevocation && t <= kCertificate; }

Digest PublicKey::key_id() const { return sha256(bytes); }

void Signature::encode(ByteWriter& w) const {
  w.raw(signer_key_id.bytes).u8(payload_tag).var(bytes);
}

Signature Signature::decode(ByteReader& r) {
  Signature s;
  ByteView id = r.raw(32);
  std::memcpy(s.signer_key_id.bytes.data(), id.data(), 32);
  s.payload_tag = r.u8();
  ByteView sig = r.var();
  if (sig.size() != 64) throw Error(ErrorCode::Malformed, "signature must be 64 bytes");
  std::memcpy(s.bytes.data(), sig.data(), 64);
  return s;
}

KeyPair::KeyPair(KeyRole role, const std::array<std::uint8_t, 32>& seed) : role_(role), seed_(seed) {
  ensure_sodium();
  crypto_sign_seed_keypair(pub_.bytes.data(), secret_.data(), seed_.data());
}

KeyPair KeyPair::generate(KeyRole role) {
  ensure_sodium();
  std::array<std::uint8_t, 32> seed;
  randombytes_buf(seed.data(), seed.size());
  return KeyPair(role, seed);
}

KeyPair KeyPair::from_seed(KeyRole role, ByteView seed32) {
  if (seed32.size() != 32) throw Error(ErrorCode::BadKey, "seed must be 32 bytes");
  std::array<std::uint8_t, 32> seed;
  std::memcpy(seed.data(), seed32.data(), 32);
  return KeyPair(role, seed);
}

KeyPair KeyPair::derive(KeyRole role, std::string_view label) {
  ByteWriter w;
  w.str("pkisn-derived-key").u8(static_cast<std::uint8_t>(role)).str(label);
  return from_seed(role, sha256(w.bytes()).bytes);
}

Signature KeyPair::sign(std::uint8_t payload_tag, ByteView payload) const {
  if (!tag::registered(payload_tag)) {
    throw Error(ErrorCode::UnregisteredTag, "tag " + std::to_string(payload_tag));
  }
  Bytes msg;
  msg.reserve(payload.size() + 1);
  msg.push_back(payload_tag);
  msg.insert(msg.end(), payload.begin(), payload.end());
  Signature sig;
  sig.signer_key_id = key_id();
  sig.payload_tag = payload_tag;
  crypto_sign_detached(sig.bytes.data(), nullptr, msg.data(), msg.size(), secret_.data());
  return sig;
}

bool verify(const PublicKey& pub, std::uint8_t payload_tag, ByteView payload, const Signature& sig) {
  ensure_sodium();
  if (sig.payload_tag != payload_tag || !tag::registered(payload_tag)) return false;
  if (sig.signer_key_id != pub.key_id()) return false;
  Bytes msg;
  msg.reserve(payload.size() + 1);
  msg.push_back(payload_tag);
  msg.insert(msg.end(), payload.begin(), payload.end());
  return crypto_sign_verify_detached(sig.bytes.data(), msg.data(), msg.size(), pub.bytes.data()) == 0;
}

}  // namespace pkisn
