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
#include <vector>

#include "pkisn/cert.hpp"
#include "pkisn/commitments.hpp"
#include "pkisn/log.hpp"
#include "pkisn/merkle.hpp"

namespace pkisn {

class FullMonitor;
struct RevocationEvidence;

struct TcrlEntry {
  Digest cert_hash;
  Bytes rev_bytes;
  UnixTime reg_ts = 0;

  friend auto operator<=>(const TcrlEntry&, const TcrlEntry&) = default;
};

/// Inclusion of the TCRL hash entry under a signed root.
struct TcrlInclusion {
  SignedRoot signed_root;
  UnixTime entry_ts = 0;
  InclusionProof proof;
};

/// Transparent CRL: vendor-signed list of the revocations of every revoked,
/// non-expired certificate, sorted by cert_hash.
struct Tcrl {
  std::uint64_t version = 0;
  UnixTime issued_at = 0;
  std::vector<TcrlEntry> entries;
  Signature vendor_signature;
  std::optional<TcrlCommitment> commitment;
  std::optional<TcrlInclusion> inclusion;

  /// 0x00 | version(8) | issued_at(8) | n(4) | (cert_hash | len+rev | reg_ts)*
  Bytes body_bytes() const;
  /// hash_leaf(body | vendor signature)
  Digest tcrl_hash() const;
  bool vendor_signature_valid(const PublicKey& vendor_pub) const;

  /// All revocations recorded for `cert_hash`; O(log n).
  std::vector<RevocationEvidence> lookup(const Digest& cert_hash) const;
  std::uint64_t byte_size() const;
};

struct TcrlSource {
  Digest cert_hash;
  UnixTime not_after = 0;
  std::vector<LoggedRevocation> revocations;
};

/// Keeps revocations of certificates still valid at `now`.
Tcrl build_tcrl(const std::vector<TcrlSource>& revoked, const KeyPair& vendor_key,
                UnixTime now, std::uint64_t version);
Tcrl build_tcrl(const FullMonitor& monitor, const KeyPair& vendor_key, UnixTime now,
                std::uint64_t version);

/// Checks the vendor signature, queues the TCRL hash and stores the returned
/// commitment in `tcrl`. Throws BadVendorSignature.
TcrlCommitment commit_tcrl(Log& log, Tcrl& tcrl, const PublicKey& vendor_pub, UnixTime now);
/// After the committed update ran: stores an inclusion proof in `tcrl`.
void attach_inclusion(const Log& log, Tcrl& tcrl);

/// Vendor signature valid and the log commitment (or, when
/// `require_inclusion`, the inclusion proof) binds tcrl_hash().
bool verify_tcrl(const Tcrl& tcrl, const PublicKey& vendor_pub, const PublicKey& log_pub,
                 bool require_inclusion = false);

/// Version n -> n+1 difference, signed like a full TCRL.
struct TcrlDelta {
  std::uint64_t from_version = 0;
  std::uint64_t to_version = 0;
  UnixTime issued_at = 0;
  std::vector<TcrlEntry> added;
  std::vector<Digest> removed;  // cert hashes dropped by expiry
  Signature vendor_signature;   // over the delta body
  Signature new_signature;      // over the resulting full TCRL body
  std::optional<TcrlCommitment> commitment;

  Bytes body_bytes() const;
  std::uint64_t byte_size() const;
};

TcrlDelta make_tcrl_delta(const Tcrl& from, const Tcrl& to, const KeyPair& vendor_key);
/// Throws BadVendorSignature when either signature fails.
Tcrl apply_tcrl_delta(const Tcrl& from, const TcrlDelta& delta, const PublicKey& vendor_pub);

}  // namespace pkisn
