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

#include "pkisn/tcrl.hpp"

#include <algorithm>

#include "pkisn/monitor.hpp"
#include "pkisn/validator.hpp"

namespace pkisn {
namespace {

void write_entry(ByteWriter& w, const TcrlEntry& e) {
  w.raw(e.cert_hash.view()).var(e.rev_bytes).u64(static_cast<std::uint64_t>(e.reg_ts));
}

std::uint64_t signature_size(const Signature& s) {
  ByteWriter w;
  s.encode(w);
  return w.bytes().size();
}

Bytes body_for(std::uint64_t version, UnixTime issued_at, const std::vector<TcrlEntry>& entries) {
  ByteWriter w;
  w.u8(0x00).u64(version).u64(static_cast<std::uint64_t>(issued_at)).u32(static_cast<std::uint32_t>(entries.size()));
  for (const TcrlEntry& e : entries) write_entry(w, e);
  return std::move(w).take();
}

}  // namespace

Bytes Tcrl::body_bytes() const { return body_for(version, issued_at, entries); }

Digest Tcrl::tcrl_hash() const {
  ByteWriter w;
  w.raw(body_bytes());
  vendor_signature.encode(w);
  return hash_leaf(w.bytes());
}

bool Tcrl::vendor_signature_valid(const PublicKey& vendor_pub) const {
  if (!std::is_sorted(entries.begin(), entries.end())) return false;
  return verify(vendor_pub, tag::kTcrlBody, body_bytes(), vendor_signature);
}

std::vector<RevocationEvidence> Tcrl::lookup(const Digest& cert_hash) const {
  auto lo = std::lower_bound(entries.begin(), entries.end(), cert_hash,
                             [](const TcrlEntry& e, const Digest& h) { return e.cert_hash < h; });
  std::vector<RevocationEvidence> out;
  for (auto it = lo; it != entries.end() && it->cert_hash == cert_hash; ++it) {
    try {
      out.push_back({RevocationMessage::decode(it->rev_bytes), it->reg_ts, false});
    } catch (const Error&) {
      // Undecodable entries carry no revocation.
    }
  }
  return out;
}

std::uint64_t Tcrl::byte_size() const { return body_bytes().size() + signature_size(vendor_signature); }

Tcrl build_tcrl(const std::vector<TcrlSource>& revoked, const KeyPair& vendor_key, UnixTime now,
                std::uint64_t version) {
  Tcrl t;
  t.version = version;
  t.issued_at = now;
  for (const TcrlSource& s : revoked) {
    if (s.not_after < now) continue;
    for (const LoggedRevocation& r : s.revocations) t.entries.push_back({s.cert_hash, r.bytes, r.reg_ts});
  }
  std::sort(t.entries.begin(), t.entries.end());
  t.entries.erase(std::unique(t.entries.begin(), t.entries.end()), t.entries.end());
  t.vendor_signature = vendor_key.sign(tag::kTcrlBody, t.body_bytes());
  return t;
}

Tcrl build_tcrl(const FullMonitor& monitor, const KeyPair& vendor_key, UnixTime now,
                std::uint64_t version) {
  std::vector<TcrlSource> sources;
  for (auto& rc : monitor.revoked_certs()) sources.push_back({rc.cert_hash, rc.not_after, std::move(rc.revocations)});
  return build_tcrl(sources, vendor_key, now, version);
}

TcrlCommitment commit_tcrl(Log& log, Tcrl& tcrl, const PublicKey& vendor_pub, UnixTime now) {
  if (!tcrl.vendor_signature_valid(vendor_pub)) {
    throw Error(ErrorCode::BadVendorSignature, "TCRL version " + std::to_string(tcrl.version));
  }
  TcrlCommitment c = log.submit_tcrl_hash(tcrl.tcrl_hash(), now);
  tcrl.commitment = c;
  return c;
}

void attach_inclusion(const Log& log, Tcrl& tcrl) {
  if (!log.latest_root()) throw Error(ErrorCode::NoSignedRoot, "the log has not run an update yet");
  const Digest h = tcrl.tcrl_hash();
  const Bytes payload(h.bytes.begin(), h.bytes.end());
  const auto& entries = log.time_tree().entries();
  for (std::uint64_t i = entries.size(); i-- > 0;) {
    if (entries[i].kind == EntryKind::Tcrl && entries[i].payload == payload) {
      tcrl.inclusion = TcrlInclusion{*log.latest_root(), entries[i].reg_timestamp, log.get_inclusion(i)};
      return;
    }
  }
  throw Error(ErrorCode::TargetNotLogged, "TCRL hash not yet appended");
}

namespace {

bool inclusion_binds(const TcrlInclusion& inc, const Digest& h, const PublicKey& log_pub) {
  if (!inc.signed_root.verify(log_pub)) return false;
  if (inc.proof.tree_size == 0) return false;
  TimeTreeEntry e{EntryKind::Tcrl, Bytes(h.bytes.begin(), h.bytes.end()), inc.entry_ts};
  return verify_inclusion(e.serialize(), inc.proof, inc.signed_root.root);
}

}  // namespace

bool verify_tcrl(const Tcrl& tcrl, const PublicKey& vendor_pub, const PublicKey& log_pub,
                 bool require_inclusion) {
  if (!tcrl.vendor_signature_valid(vendor_pub)) return false;
  const Digest h = tcrl.tcrl_hash();
  if (tcrl.inclusion && inclusion_binds(*tcrl.inclusion, h, log_pub)) return true;
  if (require_inclusion) return false;
  return tcrl.commitment && tcrl.commitment->hash == h && tcrl.commitment->verify(log_pub);
}

Bytes TcrlDelta::body_bytes() const {
  ByteWriter w;
  w.u8(0x01).u64(from_version).u64(to_version).u64(static_cast<std::uint64_t>(issued_at));
  w.u32(static_cast<std::uint32_t>(added.size()));
  for (const TcrlEntry& e : added) write_entry(w, e);
  w.u32(static_cast<std::uint32_t>(removed.size()));
  for (const Digest& d : removed) w.raw(d.view());
  return std::move(w).take();
}

std::uint64_t TcrlDelta::byte_size() const {
  return body_bytes().size() + signature_size(vendor_signature) + signature_size(new_signature);
}

TcrlDelta make_tcrl_delta(const Tcrl& from, const Tcrl& to, const KeyPair& vendor_key) {
  TcrlDelta d;
  d.from_version = from.version;
  d.to_version = to.version;
  d.issued_at = to.issued_at;
  std::set_difference(to.entries.begin(), to.entries.end(), from.entries.begin(), from.entries.end(),
                      std::back_inserter(d.added));
  std::set<Digest> kept;
  for (const TcrlEntry& e : to.entries) kept.insert(e.cert_hash);
  for (const TcrlEntry& e : from.entries) {
    if (!kept.contains(e.cert_hash) && (d.removed.empty() || d.removed.back() != e.cert_hash)) {
      d.removed.push_back(e.cert_hash);
    }
  }
  d.vendor_signature = vendor_key.sign(tag::kTcrlBody, d.body_bytes());
  d.new_signature = to.vendor_signature;
  d.commitment = to.commitment;
  return d;
}

Tcrl apply_tcrl_delta(const Tcrl& from, const TcrlDelta& delta, const PublicKey& vendor_pub) {
  if (delta.from_version != from.version) {
    throw Error(ErrorCode::GapInDelta, "delta starts at version " + std::to_string(delta.from_version));
  }
  if (!verify(vendor_pub, tag::kTcrlBody, delta.body_bytes(), delta.vendor_signature)) {
    throw Error(ErrorCode::BadVendorSignature, "delta signature");
  }
  const std::set<Digest> removed(delta.removed.begin(), delta.removed.end());
  Tcrl t;
  t.version = delta.to_version;
  t.issued_at = delta.issued_at;
  for (const TcrlEntry& e : from.entries) {
    if (!removed.contains(e.cert_hash)) t.entries.push_back(e);
  }
  t.entries.insert(t.entries.end(), delta.added.begin(), delta.added.end());
  std::sort(t.entries.begin(), t.entries.end());
  t.entries.erase(std::unique(t.entries.begin(), t.entries.end()), t.entries.end());
  t.vendor_signature = delta.new_signature;
  t.commitment = delta.commitment;
  if (!t.vendor_signature_valid(vendor_pub)) {
    throw Error(ErrorCode::BadVendorSignature, "reconstructed TCRL does not match its signature");
  }
  return t;
}

}  // namespace pkisn
