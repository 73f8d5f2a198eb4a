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

#include "pkisn/validator.hpp"

#include <algorithm>

#include "pkisn/tcrl.hpp"

namespace pkisn {

std::string_view to_string(LpCause c) {
  switch (c) {
    case LpCause::Expiry: return "expiry";
    case LpCause::VendorRev: return "vendor-rev";
    case LpCause::RkRev: return "rk-rev";
    case LpCause::ParentRev: return "parent-rev";
    case LpCause::OwnRev: return "own-rev";
    case LpCause::Unrevoked: return "unrevoked";
  }
  return "?";
}

std::string_view to_string(Decision d) { return d == Decision::Success ? "SUCCESS" : "FAIL"; }

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::None: return "None";
    case Reason::PreValidateFail: return "PreValidateFail";
    case Reason::ProofMismatch: return "ProofMismatch";
    case Reason::StaleRoot: return "StaleRoot";
    case Reason::BadSignature: return "BadSignature";
    case Reason::RegOutsideParentLP: return "RegOutsideParentLP";
    case Reason::LeafRevoked: return "LeafRevoked";
    case Reason::LeafExpired: return "LeafExpired";
    case Reason::EmptyLP: return "EmptyLP";
  }
  return "?";
}

namespace {

// Priority classes, highest first.
struct ClassBound {
  LpCause cause;
  std::optional<UnixTime> end;
  bool pending = false;

  void offer(UnixTime t, bool is_pending) {
    if (!end || t < *end || (t == *end && !is_pending && pending)) {
      end = t;
      pending = is_pending;
    }
  }
};

bool parent_applicable(const RevocationEvidence& ev, std::size_t index,
                       const std::vector<LegitimacyPeriod>& ancestor_lps) {
  const std::size_t depth = ev.message.parent_depth;
  if (depth == 0 || depth > index || index - depth >= ancestor_lps.size()) return false;
  return ancestor_lps[index - depth].contains(ev.reg_ts);
}

LegitimacyPeriod settle(const Certificate& cert, UnixTime t_x, std::span<ClassBound> classes) {
  LegitimacyPeriod lp{t_x, cert.not_after, LpCause::Unrevoked, false};
  for (const ClassBound& c : classes) {
    if (!c.end) continue;
    if (*c.end < cert.not_after) {
      lp.end = *c.end;
      lp.cause = c.cause;
      lp.pending = c.pending;
    } else {
      lp.cause = LpCause::Expiry;
    }
    break;
  }
  return lp;
}

}  // namespace

LegitimacyPeriod determine_lp_ca(const CertChain& chain, std::size_t index, UnixTime t_x,
                                 const std::vector<RevocationEvidence>& revocations,
                                 const std::vector<LegitimacyPeriod>& ancestor_lps,
                                 const PublicKey& vendor_pub) {
  const Certificate& cert = chain.certs.at(index);
  ClassBound classes[] = {{LpCause::VendorRev, {}, false},
                          {LpCause::RkRev, {}, false},
                          {LpCause::ParentRev, {}, false}};
  for (const RevocationEvidence& ev : revocations) {
    const RevocationMessage& m = ev.message;
    if (m.kind != RevocationKind::CaRevokeFrom || !m.rev_timestamp) continue;
    if (!verify_revocation(m, cert, chain, vendor_pub)) continue;
    switch (m.signer_role) {
      case SignerRole::Vendor: classes[0].offer(*m.rev_timestamp, ev.pending); break;
      case SignerRole::RevocationKey: classes[1].offer(*m.rev_timestamp, ev.pending); break;
      case SignerRole::ParentCA:
        if (parent_applicable(ev, index, ancestor_lps)) classes[2].offer(*m.rev_timestamp, ev.pending);
        break;
      case SignerRole::OwnKey: break;
    }
  }
  return settle(cert, t_x, classes);
}

LegitimacyPeriod determine_lp_leaf(const CertChain& chain, std::size_t index, UnixTime t_x,
                                   const std::vector<RevocationEvidence>& revocations,
                                   const std::vector<LegitimacyPeriod>& ancestor_lps,
                                   const PublicKey& vendor_pub) {
  const Certificate& cert = chain.certs.at(index);
  ClassBound classes[] = {{LpCause::VendorRev, {}, false},
                          {LpCause::ParentRev, {}, false},
                          {LpCause::OwnRev, {}, false}};
  for (const RevocationEvidence& ev : revocations) {
    const RevocationMessage& m = ev.message;
    if (m.kind != RevocationKind::LeafRevoke) continue;
    if (!verify_revocation(m, cert, chain, vendor_pub)) continue;
    switch (m.signer_role) {
      case SignerRole::Vendor: classes[0].offer(ev.reg_ts, ev.pending); break;
      case SignerRole::ParentCA:
        if (parent_applicable(ev, index, ancestor_lps)) classes[1].offer(ev.reg_ts, ev.pending);
        break;
      case SignerRole::OwnKey: classes[2].offer(ev.reg_ts, ev.pending); break;
      case SignerRole::RevocationKey: break;
    }
  }
  return settle(cert, t_x, classes);
}

Verdict decide(const CertChain& chain, const std::vector<UnixTime>& timestamps,
               const std::vector<std::vector<RevocationEvidence>>& revocations, UnixTime now,
               const PublicKey& vendor_pub) {
  if (chain.empty() || timestamps.size() != chain.size() || revocations.size() != chain.size()) {
    return Verdict::fail(Reason::ProofMismatch);
  }
  Verdict v;
  std::vector<LegitimacyPeriod> lps;
  lps.reserve(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Certificate& cert = chain.certs[i];
    if (i > 0 && !lps[i - 1].contains(timestamps[i])) {
      v.reason = Reason::RegOutsideParentLP;
      v.pending = lps[i - 1].pending;
      return v;
    }
    LegitimacyPeriod lp = cert.is_ca
                              ? determine_lp_ca(chain, i, timestamps[i], revocations[i], lps, vendor_pub)
                              : determine_lp_leaf(chain, i, timestamps[i], revocations[i], lps, vendor_pub);
    lps.push_back(lp);
    v.per_cert.push_back(CertVerdict{cert.cert_hash(), lp});
  }

  const LegitimacyPeriod& leaf = lps.back();
  if (leaf.contains(now)) {
    v.decision = Decision::Success;
    return v;
  }
  v.pending = leaf.pending;
  if (now < leaf.begin) {
    v.reason = Reason::EmptyLP;
  } else if (leaf.cause == LpCause::Expiry || leaf.cause == LpCause::Unrevoked) {
    v.reason = leaf.empty() ? Reason::EmptyLP : Reason::LeafExpired;
  } else {
    v.reason = Reason::LeafRevoked;
  }
  return v;
}

Reason check_proofs(const SignedRoot& root, const ChainPresenceProof& proof, const CertChain& chain,
                    const ChainCommitment& cc, const PublicKey& log_pub, UnixTime max_root_age,
                    UnixTime now) {
  if (!cc.verify(log_pub) || !root.verify(log_pub)) return Reason::BadSignature;
  if (now - root.timestamp > max_root_age) return Reason::StaleRoot;
  if (chain.empty() || cc.leaf_cert_hash != chain.leaf().cert_hash()) return Reason::ProofMismatch;
  if (cc.timestamps.size() != chain.size() || !cc.timestamps_ordered()) return Reason::ProofMismatch;
  if (!verify_chain(chain, cc.root_to_leaf(), proof, root)) return Reason::ProofMismatch;
  return Reason::None;
}

namespace {

std::optional<RevocationMessage> try_decode(ByteView bytes) {
  try {
    return RevocationMessage::decode(bytes);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

Verdict is_valid(const ValidationInput& in) {
  if (!pre_validate(in.chain, in.name, in.trust_roots, in.now)) return Verdict::fail(Reason::PreValidateFail);
  if (Reason r = check_proofs(in.signed_root, in.proof, in.chain, in.cc, in.log_pub, in.max_root_age, in.now);
      r != Reason::None) {
    return Verdict::fail(r);
  }

  std::vector<std::vector<RevocationEvidence>> revs(in.chain.size());
  for (std::size_t i = 0; i < in.chain.size(); ++i) {
    for (const LoggedRevocation& lr : in.proof.levels[i].revocations) {
      if (auto m = try_decode(lr.bytes)) revs[i].push_back({std::move(*m), lr.reg_ts, false});
    }
  }
  for (const PendingRevocation& p : in.pending_revocations) {
    if (!p.commitment.verify(in.log_pub) || p.commitment.hash != hash_leaf(p.rev_bytes)) continue;
    auto m = try_decode(p.rev_bytes);
    if (!m) continue;
    const std::size_t idx = in.chain.find(m->target_cert_hash);
    if (idx == CertChain::npos) continue;
    revs[idx].push_back({std::move(*m), in.signed_root.timestamp, true});
  }
  return decide(in.chain, in.cc.root_to_leaf(), revs, in.now, in.vendor_pub);
}

Verdict validate_with_tcrl(const CertChain& chain, const ChainCommitment& cc, const Tcrl& tcrl,
                           std::string_view name, UnixTime now,
                           const std::set<Digest>& trust_roots, const PublicKey& log_pub,
                           const PublicKey& vendor_pub) {
  if (!pre_validate(chain, name, trust_roots, now)) return Verdict::fail(Reason::PreValidateFail);
  if (!cc.verify(log_pub)) return Verdict::fail(Reason::BadSignature);
  if (cc.leaf_cert_hash != chain.leaf().cert_hash() || cc.timestamps.size() != chain.size() ||
      !cc.timestamps_ordered()) {
    return Verdict::fail(Reason::ProofMismatch);
  }
  std::vector<std::vector<RevocationEvidence>> revs;
  revs.reserve(chain.size());
  for (const Certificate& c : chain.certs) revs.push_back(tcrl.lookup(c.cert_hash()));
  return decide(chain, cc.root_to_leaf(), revs, now, vendor_pub);
}

}  // namespace pkisn
