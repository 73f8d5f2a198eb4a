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
#include <vector>

#include "pkisn/cert.hpp"
#include "pkisn/crypto.hpp"

namespace pkisn {

/// Log promise binding a leaf certificate to the registration timestamps of
/// its whole chain. Timestamps run leaf -> root and never increase.
/// Signed payload: leaf_cert_hash(32) | n(1) | t_1..t_n(8 each).
struct ChainCommitment {
  Digest leaf_cert_hash;
  std::vector<UnixTime> timestamps;
  Signature log_signature;

  Bytes signed_payload() const;
  bool timestamps_ordered() const;
  bool verify(const PublicKey& log_pub) const;
  static ChainCommitment make(const KeyPair& log_key, const Digest& leaf_cert_hash,
                              std::vector<UnixTime> timestamps_leaf_to_root);

  /// Timestamps reordered root -> leaf, matching CertChain order.
  std::vector<UnixTime> root_to_leaf() const { return {timestamps.rbegin(), timestamps.rend()}; }

  friend bool operator==(const ChainCommitment&, const ChainCommitment&) = default;
};

/// Signed payload: root(32) | timestamp(8).
struct SignedRoot {
  Digest root;
  UnixTime timestamp = 0;
  Signature log_signature;

  Bytes signed_payload() const;
  bool verify(const PublicKey& log_pub) const;
  static SignedRoot make(const KeyPair& log_key, const Digest& root, UnixTime timestamp);

  friend bool operator==(const SignedRoot&, const SignedRoot&) = default;
};

/// hash(32) | timestamp(8) signed under tag `Tag`: a promise that the hashed
/// object becomes part of the log at `timestamp`.
template <std::uint8_t Tag>
struct HashCommitment {
  static constexpr std::uint8_t kTag = Tag;

  Digest hash;
  UnixTime timestamp = 0;
  Signature log_signature;

  Bytes signed_payload() const {
    ByteWriter w;
    w.raw(hash.view()).u64(static_cast<std::uint64_t>(timestamp));
    return std::move(w).take();
  }
  bool verify(const PublicKey& log_pub) const {
    return verify_sig(log_pub, Tag, signed_payload(), log_signature);
  }
  static HashCommitment make(const KeyPair& log_key, const Digest& hash, UnixTime timestamp) {
    HashCommitment c{hash, timestamp, {}};
    c.log_signature = log_key.sign(Tag, c.signed_payload());
    return c;
  }

  friend bool operator==(const HashCommitment&, const HashCommitment&) = default;

 private:
  static bool verify_sig(const PublicKey& pub, std::uint8_t t, ByteView p, const Signature& s) {
    return pkisn::verify(pub, t, p, s);
  }
};

using RevocationCommitment = HashCommitment<tag::kRevocationCommitment>;
using TcrlCommitment = HashCommitment<tag::kTcrlCommitment>;

}  // namespace pkisn
