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

#include "pkisn/cert.hpp"
#include "pkisn/commitments.hpp"
#include "pkisn/log.hpp"
#include "pkisn/rev_tree.hpp"

namespace pkisn {

struct Tcrl;

enum class LpCause : std::uint8_t { Expiry, VendorRev, RkRev, ParentRev, OwnRev, Unrevoked };
std::string_view to_string(LpCause c);

/// Half-open [begin, end). Empty when end <= begin.
struct LegitimacyPeriod {
  UnixTime begin = 0;
  UnixTime end = 0;
  LpCause cause = LpCause::Unrevoked;
  bool pending = false;  // bounded by a revocation not yet appended

  bool empty() const { return end <= begin; }
  bool contains(UnixTime t) const { return t >= begin && t < end; }

  friend bool operator==(const LegitimacyPeriod&, const LegitimacyPeriod&) = default;
};

/// A revocation as input to legitimacy-period determination.
struct RevocationEvidence {
  RevocationMessage message;
  UnixTime reg_ts = 0;
  bool pending = false;
};

/// Revocations are checked against `chain` (signature and policy) and
/// ignored when they do not verify; `index` is the position of `cert` in it.
/// `ancestor_lps` holds the periods of chain[0..index).
LegitimacyPeriod determine_lp_ca(const CertChain& chain, std::size_t index, UnixTime t_x,
                                 const std::vector<RevocationEvidence>& revocations,
                                 const std::vector<LegitimacyPeriod>& ancestor_lps,
                                 const PublicKey& vendor_pub);

LegitimacyPeriod determine_lp_leaf(const CertChain& chain, std::size_t index, UnixTime t_x,
                                   const std::vector<RevocationEvidence>& revocations,
                                   const std::vector<LegitimacyPeriod>& ancestor_lps,
                                   const PublicKey& vendor_pub);

enum class Decision : std::uint8_t { Success, Fail };

enum class Reason : std::uint8_t {
  None,
  PreValidateFail,
  ProofMismatch,
  StaleRoot,
  BadSignature,
  RegOutsideParentLP,
  LeafRevoked,
  LeafExpired,
  EmptyLP,
};

std::string_view to_string(Decision d);
std::string_view to_string(Reason r);

struct CertVerdict {
  Digest cert_hash;
  LegitimacyPeriod lp;
};

struct Verdict {
  Decision decision = Decision::Fail;
  Reason reason = Reason::None;
  bool pending = false;
  std::vector<CertVerdict> per_cert;

  bool ok() const { return decision == Decision::Success; }
  static Verdict fail(Reason r) { return {Decision::Fail, r, false, {}}; }
};

struct ValidationInput {
  CertChain chain;
  ChainCommitment cc;
  ChainPresenceProof proof;
  SignedRoot signed_root;
  std::vector<PendingRevocation> pending_revocations;
  std::string name;
  UnixTime now = 0;
  std::set<Digest> trust_roots;
  PublicKey log_pub;
  PublicKey vendor_pub;
  UnixTime max_root_age = 2 * kDefaultSchedulingPeriod;
};

/// Complete certificate validation.
Verdict is_valid(const ValidationInput& in);

/// Proof/commitment/root match. Returns Reason::None when everything checks.
Reason check_proofs(const SignedRoot& root, const ChainPresenceProof& proof, const CertChain& chain,
                    const ChainCommitment& cc, const PublicKey& log_pub, UnixTime max_root_age,
                    UnixTime now);

inline bool verify_proofs(const SignedRoot& root, const ChainPresenceProof& proof,
                          const CertChain& chain, const ChainCommitment& cc,
                          const PublicKey& log_pub, UnixTime max_root_age, UnixTime now) {
  return check_proofs(root, proof, chain, cc, log_pub, max_root_age, now) == Reason::None;
}

/// Browser-driven path: revocations come from a verified TCRL instead of a
/// presence proof.
Verdict validate_with_tcrl(const CertChain& chain, const ChainCommitment& cc, const Tcrl& tcrl,
                           std::string_view name, UnixTime now,
                           const std::set<Digest>& trust_roots, const PublicKey& log_pub,
                           const PublicKey& vendor_pub);

/// Legitimacy-period walk shared by both paths: timestamps and revocation
/// lists are given per certificate, root -> leaf.
Verdict decide(const CertChain& chain, const std::vector<UnixTime>& timestamps,
               const std::vector<std::vector<RevocationEvidence>>& revocations, UnixTime now,
               const PublicKey& vendor_pub);

}  // namespace pkisn
