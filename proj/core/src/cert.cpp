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

#include "pkisn/cert.hpp"

#include <cstring>

namespace pkisn {
namespace {

PublicKey read_key(ByteReader& r) {
  ByteView v = r.var();
  if (v.size() != 32) throw Error(ErrorCode::Malformed, "public key must be 32 bytes");
  PublicKey k;
  std::memcpy(k.bytes.data(), v.data(), 32);
  return k;
}

Digest read_digest(ByteReader& r) {
  ByteView v = r.raw(32);
  Digest d;
  std::memcpy(d.bytes.data(), v.data(), 32);
  return d;
}

void write_tbs(const Certificate& c, ByteWriter& w) {
  w.u64(c.serial)
      .str(c.subject_name)
      .raw(c.issuer_key_id.bytes)
      .var(c.subject_public_key.bytes)
      .u8(c.is_ca ? 1 : 0)
      .u64(static_cast<std::uint64_t>(c.not_before))
      .u64(static_cast<std::uint64_t>(c.not_after))
      .u8(c.revocation_public_key ? 1 : 0);
  if (c.revocation_public_key) w.var(c.revocation_public_key->bytes);
}

bool read_flag(ByteReader& r) {
  std::uint8_t v = r.u8();
  if (v > 1) throw Error(ErrorCode::Malformed, "flag byte must be 0 or 1");
  return v == 1;
}

}  // namespace

Bytes Certificate::canonical_tbs_bytes() const {
  ByteWriter w;
  write_tbs(*this, w);
  return std::move(w).take();
}

Bytes Certificate::canonical_bytes() const {
  ByteWriter w;
  write_tbs(*this, w);
  issuer_signature.encode(w);
  return std::move(w).take();
}

Certificate Certificate::decode(ByteView bytes) {
  ByteReader r(bytes);
  Certificate c;
  c.serial = r.u64();
  c.subject_name = r.str();
  c.issuer_key_id = read_digest(r);
  c.subject_public_key = read_key(r);
  c.is_ca = read_flag(r);
  c.not_before = static_cast<UnixTime>(r.u64());
  c.not_after = static_cast<UnixTime>(r.u64());
  if (read_flag(r)) c.revocation_public_key = read_key(r);
  c.issuer_signature = Signature::decode(r);
  r.expect_done();
  if (c.not_before >= c.not_after) throw Error(ErrorCode::Malformed, "empty validity window");
  if (c.revocation_public_key.has_value() != c.is_ca) {
    throw Error(ErrorCode::Malformed, "revocation key present iff CA");
  }
  return c;
}

Digest Certificate::cert_hash() const { return hash_leaf(canonical_bytes()); }

Certificate issue_certificate(const IssueParams& p, const KeyPair& issuer) {
  if (p.not_before >= p.not_after) throw Error(ErrorCode::PolicyViolation, "not_before >= not_after");
  if (p.revocation_public_key.has_value() != p.is_ca) {
    throw Error(ErrorCode::PolicyViolation, "revocation key must be present exactly on CA certs");
  }
  if (issuer.role() != KeyRole::StandardCA) {
    throw Error(ErrorCode::PolicyViolation, "certificates are signed with a standard CA key");
  }
  Certificate c;
  c.serial = p.serial;
  c.subject_name = p.subject_name;
  c.issuer_key_id = issuer.key_id();
  c.subject_public_key = p.subject_public_key;
  c.is_ca = p.is_ca;
  c.not_before = p.not_before;
  c.not_after = p.not_after;
  c.revocation_public_key = p.revocation_public_key;
  c.issuer_signature = issuer.sign(tag::kCertificate, c.canonical_tbs_bytes());
  return c;
}

std::size_t CertChain::find(const Digest& cert_hash) const {
  for (std::size_t i = 0; i < certs.size(); ++i) {
    if (certs[i].cert_hash() == cert_hash) return i;
  }
  return npos;
}

bool chain_links_valid(const CertChain& chain, bool require_leaf_end) {
  if (chain.empty()) return false;
  const Certificate& root = chain.root();
  if (!root.is_ca || !root.self_signed()) return false;
  if (!verify(root.subject_public_key, tag::kCertificate, root.canonical_tbs_bytes(),
              root.issuer_signature)) {
    return false;
  }
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const Certificate& parent = chain.certs[i - 1];
    const Certificate& child = chain.certs[i];
    if (!parent.is_ca) return false;
    if (child.issuer_key_id != parent.subject_public_key.key_id()) return false;
    if (!verify(parent.subject_public_key, tag::kCertificate, child.canonical_tbs_bytes(),
                child.issuer_signature)) {
      return false;
    }
  }
  return !require_leaf_end || !chain.leaf().is_ca;
}

std::string_view to_string(RevocationKind k) {
  return k == RevocationKind::LeafRevoke ? "leaf" : "ca-from";
}

std::string_view to_string(SignerRole r) {
  switch (r) {
    case SignerRole::OwnKey: return "own";
    case SignerRole::ParentCA: return "parent";
    case SignerRole::RevocationKey: return "rk";
    case SignerRole::Vendor: return "vendor";
  }
  return "?";
}

std::uint8_t RevocationMessage::payload_tag() const {
  return kind == RevocationKind::LeafRevoke ? tag::kLeafRevocation : tag::kCaRevocation;
}

Bytes RevocationMessage::signed_payload() const {
  ByteWriter w;
  w.raw(target_cert_hash.bytes);
  if (kind == RevocationKind::CaRevokeFrom) w.u64(static_cast<std::uint64_t>(rev_timestamp.value_or(0)));
  return std::move(w).take();
}

Bytes RevocationMessage::canonical_bytes() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(kind)).raw(target_cert_hash.bytes);
  w.u8(rev_timestamp ? 1 : 0);
  if (rev_timestamp) w.u64(static_cast<std::uint64_t>(*rev_timestamp));
  w.u8(static_cast<std::uint8_t>(signer_role)).u8(parent_depth);
  signature.encode(w);
  return std::move(w).take();
}

RevocationMessage RevocationMessage::decode(ByteView bytes) {
  ByteReader r(bytes);
  RevocationMessage m;
  std::uint8_t kind = r.u8();
  if (kind < 1 || kind > 2) throw Error(ErrorCode::Malformed, "revocation kind");
  m.kind = static_cast<RevocationKind>(kind);
  m.target_cert_hash = read_digest(r);
  if (read_flag(r)) m.rev_timestamp = static_cast<UnixTime>(r.u64());
  std::uint8_t role = r.u8();
  if (role < 1 || role > 4) throw Error(ErrorCode::Malformed, "signer role");
  m.signer_role = static_cast<SignerRole>(role);
  m.parent_depth = r.u8();
  m.signature = Signature::decode(r);
  r.expect_done();
  if (m.rev_timestamp.has_value() != (m.kind == RevocationKind::CaRevokeFrom)) {
    throw Error(ErrorCode::Malformed, "rev_timestamp present iff CA revocation");
  }
  return m;
}

bool revocation_policy_allows(RevocationKind kind, SignerRole role) {
  switch (role) {
    case SignerRole::ParentCA:
    case SignerRole::Vendor: return true;
    case SignerRole::OwnKey: return kind == RevocationKind::LeafRevoke;
    case SignerRole::RevocationKey: return kind == RevocationKind::CaRevokeFrom;
  }
  return false;
}

RevocationMessage make_revocation(RevocationKind kind, const Certificate& target,
                                  std::optional<UnixTime> rev_timestamp, const KeyPair& signer,
                                  SignerRole role, std::uint8_t parent_depth) {
  if (!revocation_policy_allows(kind, role)) {
    throw Error(ErrorCode::PolicyViolation,
                std::string(to_string(role)) + " may not sign a " + std::string(to_string(kind)) +
                    " revocation");
  }
  if ((kind == RevocationKind::CaRevokeFrom) != target.is_ca) {
    throw Error(ErrorCode::PolicyViolation, "CA certificates take revoke-from, leaves take revoke");
  }
  if (kind == RevocationKind::CaRevokeFrom) {
    if (!rev_timestamp) throw Error(ErrorCode::PolicyViolation, "revoke-from needs a timestamp");
    if (*rev_timestamp >= target.not_after) {
      throw Error(ErrorCode::TimestampAfterExpiry, "rev_timestamp must precede not_after");
    }
  } else if (rev_timestamp) {
    throw Error(ErrorCode::PolicyViolation, "leaf revocations carry no timestamp");
  }
  KeyRole expected = KeyRole::StandardCA;
  switch (role) {
    case SignerRole::OwnKey: expected = KeyRole::StandardLeaf; break;
    case SignerRole::ParentCA: expected = KeyRole::StandardCA; break;
    case SignerRole::RevocationKey: expected = KeyRole::RevocationKey; break;
    case SignerRole::Vendor: expected = KeyRole::VendorKey; break;
  }
  if (signer.role() != expected) {
    throw Error(ErrorCode::PolicyViolation, "signer key role does not match signer_role");
  }
  if ((role == SignerRole::ParentCA) != (parent_depth > 0)) {
    throw Error(ErrorCode::PolicyViolation, "parent_depth is set exactly for ParentCA");
  }
  RevocationMessage m;
  m.kind = kind;
  m.target_cert_hash = target.cert_hash();
  m.rev_timestamp = rev_timestamp;
  m.signer_role = role;
  m.parent_depth = parent_depth;
  m.signature = signer.sign(m.payload_tag(), m.signed_payload());
  return m;
}

bool verify_revocation(const RevocationMessage& rev, const Certificate& target,
                       const CertChain& chain, const PublicKey& vendor_pub) {
  const Digest target_hash = target.cert_hash();
  if (rev.target_cert_hash != target_hash) return false;
  const std::size_t idx = chain.find(target_hash);
  if (idx == CertChain::npos) return false;
  if (!revocation_policy_allows(rev.kind, rev.signer_role)) return false;
  if ((rev.kind == RevocationKind::CaRevokeFrom) != target.is_ca) return false;
  if (rev.rev_timestamp.has_value() != (rev.kind == RevocationKind::CaRevokeFrom)) return false;
  if (rev.rev_timestamp && *rev.rev_timestamp >= target.not_after) return false;

  const PublicKey* key = nullptr;
  switch (rev.signer_role) {
    case SignerRole::OwnKey:
      if (rev.parent_depth != 0) return false;
      key = &target.subject_public_key;
      break;
    case SignerRole::ParentCA:
      if (rev.parent_depth == 0 || rev.parent_depth > idx) return false;
      key = &chain.certs[idx - rev.parent_depth].subject_public_key;
      break;
    case SignerRole::RevocationKey:
      if (rev.parent_depth != 0 || !target.revocation_public_key) return false;
      key = &*target.revocation_public_key;
      break;
    case SignerRole::Vendor:
      if (rev.parent_depth != 0) return false;
      key = &vendor_pub;
      break;
  }
  return verify(*key, rev.payload_tag(), rev.signed_payload(), rev.signature);
}

bool names_match(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; };
    if (lower(a[i]) != lower(b[i])) return false;
  }
  return true;
}

bool pre_validate(const CertChain& chain, std::string_view name,
                  const std::set<Digest>& trust_roots, UnixTime now) {
  if (chain.empty()) return false;
  if (!names_match(chain.leaf().subject_name, name)) return false;
  if (!chain_links_valid(chain, /*require_leaf_end=*/true)) return false;
  if (!trust_roots.contains(chain.root().cert_hash())) return false;
  for (const Certificate& c : chain.certs) {
    if (now < c.not_before || now > c.not_after) return false;
  }
  return true;
}

}  // namespace pkisn
