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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pkisn/bytes.hpp"
#include "pkisn/crypto.hpp"

namespace pkisn {

using UnixTime = std::int64_t;

/// Native certificate. Replaces X.509 with a deterministic field layout:
/// serial(8) | len+subject | issuer_key_id(32) | len+subject_key | is_ca(1) |
/// not_before(8) | not_after(8) | has_rk(1) | [len+revocation_key]
struct Certificate {
  std::uint64_t serial = 0;
  std::string subject_name;
  Digest issuer_key_id;
  PublicKey subject_public_key;
  bool is_ca = false;
  UnixTime not_before = 0;
  UnixTime not_after = 0;
  std::optional<PublicKey> revocation_public_key;
  Signature issuer_signature;

  Bytes canonical_tbs_bytes() const;
  /// TBS followed by the encoded issuer signature.
  Bytes canonical_bytes() const;
  static Certificate decode(ByteView bytes);

  /// hash_leaf(canonical_bytes())
  Digest cert_hash() const;
  bool self_signed() const { return issuer_key_id == subject_public_key.key_id(); }

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct IssueParams {
  std::uint64_t serial = 0;
  std::string subject_name;
  PublicKey subject_public_key;
  bool is_ca = false;
  UnixTime not_before = 0;
  UnixTime not_after = 0;
  std::optional<PublicKey> revocation_public_key;
};

/// Signs `params` with `issuer`. For a self-signed root pass the subject's
/// own key. Throws PolicyViolation when the rk presence does not match is_ca
/// or the validity window is empty.
Certificate issue_certificate(const IssueParams& params, const KeyPair& issuer);

/// Ordered root -> leaf.
struct CertChain {
  std::vector<Certificate> certs;

  const Certificate& root() const { return certs.front(); }
  const Certificate& leaf() const { return certs.back(); }
  std::size_t size() const { return certs.size(); }
  bool empty() const { return certs.empty(); }

  /// Index of the certificate with this hash, or npos.
  std::size_t find(const Digest& cert_hash) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Root self-signed and CA, every link signed by its parent, every
/// non-final certificate a CA. When `require_leaf_end` the final
/// certificate must be a non-CA.
bool chain_links_valid(const CertChain& chain, bool require_leaf_end);

enum class RevocationKind : std::uint8_t { LeafRevoke = 1, CaRevokeFrom = 2 };

enum class SignerRole : std::uint8_t { OwnKey = 1, ParentCA = 2, RevocationKey = 3, Vendor = 4 };

std::string_view to_string(RevocationKind k);
std::string_view to_string(SignerRole r);

struct RevocationMessage {
  RevocationKind kind = RevocationKind::LeafRevoke;
  Digest target_cert_hash;
  std::optional<UnixTime> rev_timestamp;  // iff CaRevokeFrom
  SignerRole signer_role = SignerRole::OwnKey;
  /// Levels above the target for ParentCA (1 = direct issuer); 0 otherwise.
  std::uint8_t parent_depth = 0;
  Signature signature;

  Digest signer_key_id() const { return signature.signer_key_id; }
  std::uint8_t payload_tag() const;
  /// The bytes covered by the signature (without the tag).
  Bytes signed_payload() const;

  Bytes canonical_bytes() const;
  static RevocationMessage decode(ByteView bytes);
  Digest rev_hash() const { return hash_leaf(canonical_bytes()); }

  friend bool operator==(const RevocationMessage&, const RevocationMessage&) = default;
};

/// The (kind, role) policy matrix:
///   LeafRevoke:   OwnKey, ParentCA, Vendor
///   CaRevokeFrom: RevocationKey, ParentCA, Vendor
bool revocation_policy_allows(RevocationKind kind, SignerRole role);

RevocationMessage make_revocation(RevocationKind kind, const Certificate& target,
                                  std::optional<UnixTime> rev_timestamp, const KeyPair& signer,
                                  SignerRole role, std::uint8_t parent_depth = 0);

/// Pure predicate; never consults time. `target` must be a member of `chain`.
bool verify_revocation(const RevocationMessage& rev, const Certificate& target,
                       const CertChain& chain, const PublicKey& vendor_pub);

/// Exact, ASCII case-insensitive name comparison.
bool names_match(std::string_view a, std::string_view b);

bool pre_validate(const CertChain& chain, std::string_view name,
                  const std::set<Digest>& trust_roots, UnixTime now);

}  // namespace pkisn
