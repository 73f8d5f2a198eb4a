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

#include "pkisn/monitor.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <memory>

namespace pkisn {

std::string_view to_string(MisbehaviorKind k) {
  switch (k) {
    case MisbehaviorKind::IncorrectCC: return "IncorrectCC";
    case MisbehaviorKind::SuppressedRevocation: return "SuppressedRevocation";
    case MisbehaviorKind::ForkedRoots: return "ForkedRoots";
    case MisbehaviorKind::InvalidEntry: return "InvalidEntry";
    case MisbehaviorKind::InconsistentRoot: return "InconsistentRoot";
  }
  return "?";
}

MisbehaviorError::MisbehaviorError(ErrorCode code, MisbehaviorReport report)
    : Error(code, std::string(to_string(report.kind)) + ": " + report.detail), report_(std::move(report)) {}

namespace {

std::optional<Digest> digest_payload(const Bytes& payload) {
  if (payload.size() != 32) return std::nullopt;
  Digest d;
  std::copy(payload.begin(), payload.end(), d.bytes.begin());
  return d;
}

template <typename T>
std::optional<T> try_decode(ByteView bytes) {
  try {
    return T::decode(bytes);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// FullMonitor

FullMonitor::FullMonitor(PublicKey log_pub, PublicKey vendor_pub, std::set<Digest> trust_roots)
    : log_pub_(log_pub), vendor_pub_(vendor_pub), trust_roots_(std::move(trust_roots)) {}

std::size_t FullMonitor::full_sync(LogSource& source) {
  std::size_t applied = 0;
  for (const UpdateRecord& u : source.updates_since(tree_size())) {
    if (u.tree_size <= tree_size()) continue;
    apply_batch(source.entries(tree_size(), u.tree_size), u);
    ++applied;
  }
  return applied;
}

void FullMonitor::apply_batch(const std::vector<TimeTreeEntry>& batch, const UpdateRecord& update) {
  const SignedRoot& sr = update.signed_root;
  const std::uint64_t start = time_tree_.size();
  MisbehaviorReport rep;
  rep.kind = MisbehaviorKind::InconsistentRoot;
  rep.roots = {sr};
  auto reject_root = [&](std::string detail) {
    rep.detail = std::move(detail);
    throw MisbehaviorError(ErrorCode::RootMismatch, std::move(rep));
  };

  if (!sr.verify(log_pub_)) reject_root("signed root does not verify");
  if (batch.empty() || update.tree_size != start + batch.size()) reject_root("batch does not match update size");
  if (!updates_.empty() && sr.timestamp <= updates_.back().signed_root.timestamp) {
    reject_root("update timestamp does not advance");
  }
  if (batch.back().kind != EntryKind::RevTreeRoot) reject_root("batch does not end with a RevTree root");
  for (const TimeTreeEntry& e : batch) {
    if (e.reg_timestamp != sr.timestamp) reject_root("entry timestamp differs from update time");
  }

  time_tree_.append(batch);
  if (time_tree_.root() != sr.root) {
    rep.entries = time_tree_.entries();
    rollback();
    reject_root("TimeTree root differs from signed root");
  }

  if (auto bad = admit(batch, sr.timestamp)) {
    MisbehaviorReport inv;
    inv.kind = MisbehaviorKind::InvalidEntry;
    inv.detail = bad->detail;
    inv.roots = {sr};
    inv.entries = {batch[bad->index]};
    inv.inclusion = time_tree_.inclusion_proof(start + bad->index);
    inv.chain = std::move(bad->chain);
    rollback();
    throw MisbehaviorError(ErrorCode::InvalidEntry, std::move(inv));
  }

  const Digest rev_root = rev_tree_.commit();
  if (digest_payload(batch.back().payload) != rev_root) {
    rep.entries = time_tree_.entries();
    rollback();
    reject_root("RevTree root entry differs from the recomputed RevTree");
  }
  updates_.push_back(update);
  roots_by_time_[sr.timestamp] = sr;
}

std::optional<FullMonitor::Rejection> FullMonitor::admit(const std::vector<TimeTreeEntry>& batch,
                                                          UnixTime ts) {
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const TimeTreeEntry& e = batch[i];
    auto reject = [&](std::string detail, CertChain chain = {}) {
      return Rejection{i, std::move(chain), std::move(detail)};
    };
    switch (e.kind) {
      case EntryKind::Cert: {
        auto cert = try_decode<Certificate>(e.payload);
        if (!cert) return reject("undecodable certificate");
        const Digest h = cert->cert_hash();
        if (certs_.contains(h)) return reject("certificate appended twice");
        std::optional<Digest> parent;
        CertChain chain;
        if (cert->self_signed()) {
          if (!trust_roots_.contains(h)) return reject("self-signed certificate is not a trust root", {{*cert}});
        } else {
          auto owner = key_to_cert_.find(cert->issuer_key_id);
          if (owner == key_to_cert_.end()) return reject("issuer not logged", {{*cert}});
          parent = owner->second;
          chain = *lineage(*parent);
        }
        chain.certs.push_back(*cert);
        if (!chain_links_valid(chain, false)) return reject("certificate chain does not verify", std::move(chain));
        if (cert->is_ca) key_to_cert_.try_emplace(cert->subject_public_key.key_id(), h);
        rev_tree_.insert(h, e.payload, ts, parent);
        certs_.emplace(h, CertRecord{std::move(*cert), ts, parent, false});
        break;
      }
      case EntryKind::Revocation: {
        auto rev = try_decode<RevocationMessage>(e.payload);
        if (!rev) return reject("undecodable revocation");
        const Digest rh = hash_leaf(e.payload);
        if (revocations_.contains(rh)) return reject("revocation appended twice");
        auto target = certs_.find(rev->target_cert_hash);
        if (target == certs_.end()) return reject("revocation target not logged");
        CertChain chain = *lineage(target->first);
        if (!verify_revocation(*rev, target->second.cert, chain, vendor_pub_)) {
          return reject("revocation does not verify", std::move(chain));
        }
        if (rev->signer_role == SignerRole::RevocationKey) {
          if (target->second.rk_revoked) return reject("second revocation-key revocation", std::move(chain));
          target->second.rk_revoked = true;
        }
        revocations_.emplace(rh, target->first);
        rev_tree_.add_revocation(target->first, LoggedRevocation{e.payload, ts});
        break;
      }
      case EntryKind::Tcrl:
        if (e.payload.size() != 32) return reject("TCRL entry is not a digest");
        break;
      case EntryKind::RevTreeRoot:
        if (i + 1 != batch.size() || e.payload.size() != 32) return reject("misplaced RevTree root");
        break;
    }
  }
  return std::nullopt;
}

void FullMonitor::rollback() {
  FullMonitor fresh(log_pub_, vendor_pub_, trust_roots_);
  const auto& entries = time_tree_.entries();
  std::uint64_t pos = 0;
  for (const UpdateRecord& u : updates_) {
    fresh.apply_batch({entries.begin() + static_cast<std::ptrdiff_t>(pos),
                       entries.begin() + static_cast<std::ptrdiff_t>(u.tree_size)},
                      u);
    pos = u.tree_size;
  }
  *this = std::move(fresh);
}

std::optional<SignedRoot> FullMonitor::latest_root() const {
  if (updates_.empty()) return std::nullopt;
  return updates_.back().signed_root;
}

RevRootAnchor FullMonitor::anchor() const {
  if (updates_.empty()) throw Error(ErrorCode::NoSignedRoot, "monitor has not synced an update");
  return RevRootAnchor{rev_tree_.root(), updates_.back().signed_root.timestamp,
                       time_tree_.inclusion_proof(time_tree_.size() - 1)};
}

RootCheck FullMonitor::check_root(const SignedRoot& client_root) const {
  auto it = roots_by_time_.find(client_root.timestamp);
  if (it == roots_by_time_.end()) {
    throw Error(ErrorCode::UnknownTimestamp, "no root for " + std::to_string(client_root.timestamp));
  }
  if (it->second == client_root) return {};
  RootCheck r{false, std::nullopt};
  if (client_root.verify(log_pub_) && client_root.root != it->second.root) {
    MisbehaviorReport rep;
    rep.kind = MisbehaviorKind::ForkedRoots;
    rep.detail = "two roots for update " + std::to_string(client_root.timestamp);
    rep.roots = {it->second, client_root};
    r.fork = std::move(rep);
  }
  return r;
}

std::optional<MisbehaviorReport> FullMonitor::check_cc(const CertChain& chain, const ChainCommitment& cc) const {
  if (chain.empty() || !cc.verify(log_pub_) || cc.leaf_cert_hash != chain.leaf().cert_hash() ||
      cc.timestamps.size() != chain.size() || updates_.empty()) {
    return std::nullopt;
  }
  const SignedRoot& latest = updates_.back().signed_root;
  if (*std::max_element(cc.timestamps.begin(), cc.timestamps.end()) > latest.timestamp) return std::nullopt;
  const std::vector<Digest> query = proof_query(chain, cc);
  const auto missing = rev_tree_.first_missing_level(query);
  if (!missing) return std::nullopt;

  MisbehaviorReport rep;
  rep.kind = MisbehaviorKind::IncorrectCC;
  rep.detail = "level " + std::to_string(*missing) + " of the committed chain is not in the log";
  rep.cc = cc;
  rep.chain = chain;
  rep.timestamps = cc.root_to_leaf();
  rep.roots = {latest};
  AbsenceProof absence = rev_tree_.prove_absence(
      std::vector<Digest>(query.begin(), query.begin() + static_cast<std::ptrdiff_t>(*missing)), query[*missing]);
  absence.anchor = anchor();
  rep.absence = std::move(absence);
  return rep;
}

std::optional<MisbehaviorReport> FullMonitor::check_revocation_commitment(
    const CertChain& chain, const RevocationMessage& rev, const RevocationCommitment& commitment) const {
  const Bytes bytes = rev.canonical_bytes();
  if (!commitment.verify(log_pub_) || commitment.hash != hash_leaf(bytes) || updates_.empty()) return std::nullopt;
  const SignedRoot& latest = updates_.back().signed_root;
  if (latest.timestamp < commitment.timestamp || revocations_.contains(commitment.hash)) return std::nullopt;

  MisbehaviorReport rep;
  rep.kind = MisbehaviorKind::SuppressedRevocation;
  rep.detail = "committed revocation missing after update " + std::to_string(commitment.timestamp);
  rep.rev_commitment = commitment;
  rep.revocation = bytes;
  rep.chain = chain;
  rep.roots = {latest};
  std::vector<Digest> ids;
  for (const Certificate& c : chain.certs) {
    auto ts = reg_timestamp(c.cert_hash());
    if (!ts) {
      rep.detail += "; chain not in replica";
      return rep;
    }
    rep.timestamps.push_back(*ts);
    ids.push_back(rev_id_hash(c.canonical_bytes(), *ts));
  }
  rep.presence = prove_chain(ids);
  return rep;
}

std::optional<CertChain> FullMonitor::lineage(const Digest& cert_hash) const {
  CertChain chain;
  std::optional<Digest> cur = cert_hash;
  while (cur) {
    auto it = certs_.find(*cur);
    if (it == certs_.end()) return std::nullopt;
    chain.certs.push_back(it->second.cert);
    cur = it->second.parent;
  }
  std::reverse(chain.certs.begin(), chain.certs.end());
  return chain;
}

std::optional<UnixTime> FullMonitor::reg_timestamp(const Digest& cert_hash) const {
  auto it = certs_.find(cert_hash);
  if (it == certs_.end()) return std::nullopt;
  return it->second.reg_ts;
}

std::vector<FullMonitor::RevokedCert> FullMonitor::revoked_certs() const {
  std::vector<RevokedCert> out;
  for (const auto& [hash, rec] : certs_) {
    const auto* revs = rev_tree_.revocations_of(hash);
    if (revs && !revs->empty()) out.push_back({hash, rec.cert.not_after, *revs});
  }
  std::sort(out.begin(), out.end(), [](const RevokedCert& a, const RevokedCert& b) { return a.cert_hash < b.cert_hash; });
  return out;
}

ChainPresenceProof FullMonitor::prove_chain(const std::vector<Digest>& query) const {
  return ChainPresenceProof{rev_tree_.prove_chain(query), anchor()};
}

// ---------------------------------------------------------------------------
// Reports

bool entries_inconsistent(const std::vector<TimeTreeEntry>& entries, const Digest& root) {
  MerkleTree tree;
  for (const TimeTreeEntry& e : entries) tree.append(e.leaf_hash());
  if (tree.root() != root) return true;

  RevTree rev_tree;
  std::unordered_map<Digest, Digest> key_owner;
  for (const TimeTreeEntry& e : entries) {
    switch (e.kind) {
      case EntryKind::Cert: {
        auto cert = try_decode<Certificate>(e.payload);
        if (!cert) return true;
        const Digest h = cert->cert_hash();
        std::optional<Digest> parent;
        if (!cert->self_signed()) {
          auto it = key_owner.find(cert->issuer_key_id);
          if (it == key_owner.end()) return true;
          parent = it->second;
        }
        if (cert->is_ca) key_owner.try_emplace(cert->subject_public_key.key_id(), h);
        try {
          rev_tree.insert(h, e.payload, e.reg_timestamp, parent);
        } catch (const Error&) {
          return true;
        }
        break;
      }
      case EntryKind::Revocation: {
        auto rev = try_decode<RevocationMessage>(e.payload);
        if (!rev || !rev_tree.contains_cert(rev->target_cert_hash)) return true;
        rev_tree.add_revocation(rev->target_cert_hash, LoggedRevocation{e.payload, e.reg_timestamp});
        break;
      }
      case EntryKind::RevTreeRoot:
        if (digest_payload(e.payload) != rev_tree.commit()) return true;
        break;
      case EntryKind::Tcrl:
        break;
    }
  }
  return false;
}

namespace {

bool entry_intrinsically_invalid(const TimeTreeEntry& e, const CertChain& chain, const PublicKey& vendor_pub) {
  switch (e.kind) {
    case EntryKind::Cert: {
      auto cert = try_decode<Certificate>(e.payload);
      if (!cert) return true;
      if (chain.empty() || chain.leaf() != *cert) return false;
      if (cert->self_signed()) return !chain_links_valid(CertChain{{*cert}}, false);
      if (chain.size() < 2) return false;
      const Certificate& issuer = chain.certs[chain.size() - 2];
      if (issuer.subject_public_key.key_id() != cert->issuer_key_id) return false;
      return !issuer.is_ca ||
             !verify(issuer.subject_public_key, tag::kCertificate, cert->canonical_tbs_bytes(), cert->issuer_signature);
    }
    case EntryKind::Revocation: {
      auto rev = try_decode<RevocationMessage>(e.payload);
      if (!rev) return true;
      if (chain.empty() || !chain_links_valid(chain, false) || chain.leaf().cert_hash() != rev->target_cert_hash) {
        return false;
      }
      return !verify_revocation(*rev, chain.leaf(), chain, vendor_pub);
    }
    case EntryKind::RevTreeRoot:
    case EntryKind::Tcrl:
      return e.payload.size() != 32;
  }
  return false;
}

}  // namespace

bool verify_report(const MisbehaviorReport& r, const PublicKey& log_pub, const PublicKey& vendor_pub) {
  switch (r.kind) {
    case MisbehaviorKind::ForkedRoots:
      return r.roots.size() == 2 && r.roots[0].verify(log_pub) && r.roots[1].verify(log_pub) &&
             r.roots[0].timestamp == r.roots[1].timestamp && r.roots[0].root != r.roots[1].root;

    case MisbehaviorKind::IncorrectCC: {
      if (!r.cc || !r.absence || r.roots.size() != 1 || r.chain.empty()) return false;
      const ChainCommitment& cc = *r.cc;
      const SignedRoot& root = r.roots[0];
      if (!cc.verify(log_pub) || !root.verify(log_pub)) return false;
      if (cc.leaf_cert_hash != r.chain.leaf().cert_hash() || cc.timestamps.size() != r.chain.size()) return false;
      if (*std::max_element(cc.timestamps.begin(), cc.timestamps.end()) > root.timestamp) return false;
      if (!verify_absence(*r.absence, root)) return false;
      const std::vector<Digest> query = proof_query(r.chain, cc);
      const std::size_t level = r.absence->ancestors.size();
      if (level >= query.size() || r.absence->missing != query[level]) return false;
      for (std::size_t i = 0; i < level; ++i) {
        if (r.absence->ancestors[i].id_hash != query[i]) return false;
      }
      return true;
    }

    case MisbehaviorKind::SuppressedRevocation: {
      if (!r.rev_commitment || !r.presence || r.roots.size() != 1 || r.chain.empty()) return false;
      const SignedRoot& root = r.roots[0];
      if (!r.rev_commitment->verify(log_pub) || r.rev_commitment->hash != hash_leaf(r.revocation)) return false;
      if (!root.verify(log_pub) || root.timestamp < r.rev_commitment->timestamp) return false;
      auto rev = try_decode<RevocationMessage>(r.revocation);
      if (!rev || rev->target_cert_hash != r.chain.leaf().cert_hash()) return false;
      if (!verify_chain(r.chain, r.timestamps, *r.presence, root)) return false;
      for (const LoggedRevocation& lr : r.presence->levels.back().revocations) {
        if (lr.bytes == r.revocation) return false;
      }
      return true;
    }

    case MisbehaviorKind::InvalidEntry:
      if (r.roots.size() != 1 || r.entries.size() != 1 || !r.inclusion) return false;
      if (!r.roots[0].verify(log_pub)) return false;
      if (!verify_inclusion(r.entries[0].serialize(), *r.inclusion, r.roots[0].root)) return false;
      return entry_intrinsically_invalid(r.entries[0], r.chain, vendor_pub);

    case MisbehaviorKind::InconsistentRoot:
      return r.roots.size() == 1 && r.roots[0].verify(log_pub) && entries_inconsistent(r.entries, r.roots[0].root);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Delta updates

namespace {

using NotAfterLookup = std::function<std::optional<UnixTime>(const Digest&)>;

NotAfterLookup scan_not_after(const TimeTree& tree, std::uint64_t hi) {
  auto not_after = std::make_shared<std::unordered_map<Digest, UnixTime>>();
  for (std::uint64_t i = 0; i < hi; ++i) {
    const TimeTreeEntry& e = tree.entry(i);
    if (e.kind != EntryKind::Cert) continue;
    if (auto c = try_decode<Certificate>(e.payload)) not_after->emplace(c->cert_hash(), c->not_after);
  }
  return [not_after](const Digest& h) -> std::optional<UnixTime> {
    auto it = not_after->find(h);
    if (it == not_after->end()) return std::nullopt;
    return it->second;
  };
}

NotAfterLookup log_not_after(const Log& log) {
  return [&log](const Digest& h) -> std::optional<UnixTime> {
    const Certificate* c = log.certificate(h);
    if (!c) return std::nullopt;
    return c->not_after;
  };
}

// prefix[i] = prunable entries in [lo, lo + i) as of prune.now.
std::vector<std::uint64_t> prunable_prefix(const TimeTree& tree, std::uint64_t lo, std::uint64_t hi,
                                           const PruneParams& prune, const NotAfterLookup& not_after) {
  const auto& entries = tree.entries();
  auto expired = [&](const Digest& cert_hash) {
    auto t = not_after(cert_hash);
    return t && *t + prune.grace <= prune.now;
  };
  std::vector<std::uint64_t> prefix(hi - lo + 1, 0);
  for (std::uint64_t i = lo; i < hi; ++i) {
    const TimeTreeEntry& e = entries[i];
    bool p = false;
    if (e.kind == EntryKind::Cert) {
      p = expired(hash_leaf(e.payload));
    } else if (e.kind == EntryKind::Revocation) {
      auto rev = try_decode<RevocationMessage>(e.payload);
      p = rev && expired(rev->target_cert_hash);
    }
    prefix[i - lo + 1] = prefix[i - lo] + (p ? 1 : 0);
  }
  return prefix;
}

// Height of the tallest aligned, fully prunable subtree starting at i.
template <typename F>
std::uint8_t cover_level(std::uint64_t i, std::uint64_t limit, const F& all_prunable) {
  std::uint8_t level = 0;
  while (level < 62) {
    const std::uint64_t span = std::uint64_t{2} << level;
    if (i % span != 0 || i + span > limit || !all_prunable(i, i + span)) break;
    ++level;
  }
  return level;
}

DeltaUpdate make_delta(const TimeTree& tree, std::uint64_t horizon, std::uint64_t to_size,
                       const SignedRoot& signed_root, const PruneParams& prune, const NotAfterLookup& not_after) {
  if (horizon > to_size || to_size > tree.size()) throw Error(ErrorCode::SizeOutOfRange, "delta range");
  const auto& entries = tree.entries();
  const std::vector<std::uint64_t> prefix = prunable_prefix(tree, horizon, to_size, prune, not_after);
  auto all_prunable = [&](std::uint64_t lo, std::uint64_t hi) {
    return prefix[hi - horizon] - prefix[lo - horizon] == hi - lo;
  };

  DeltaUpdate d;
  d.from_size = horizon;
  d.to_size = to_size;
  d.signed_root = signed_root;
  auto batch_for = [&](UnixTime ts) -> DeltaBatch& {
    if (d.batches.empty() || d.batches.back().ts != ts) d.batches.push_back(DeltaBatch{ts, {}});
    return d.batches.back();
  };

  std::uint64_t i = horizon;
  while (i < to_size) {
    DeltaBatch& batch = batch_for(entries[i].reg_timestamp);
    if (all_prunable(i, i + 1)) {
      const std::uint8_t level = cover_level(i, to_size, all_prunable);
      const std::uint64_t span = std::uint64_t{1} << level;
      if (level == 0 && entries[i].kind == EntryKind::Revocation) {
        batch.items.push_back(DeltaItem{DeltaItem::Kind::Full, 0, i, {}, entries[i].serialize()});
        ++i;
        continue;
      }
      DeltaItem item;
      item.kind = level == 0 ? DeltaItem::Kind::Hash : DeltaItem::Kind::Cover;
      item.level = level;
      item.index = i >> level;
      item.digest = level == 0 ? tree.merkle().leaf(i) : tree.merkle().range_hash(i, i + span);
      batch.items.push_back(std::move(item));
      i += span;
      continue;
    }
    DeltaItem item;
    item.index = i;
    if (entries[i].kind == EntryKind::Revocation) {
      item.kind = DeltaItem::Kind::Full;
      item.entry = entries[i].serialize();
    } else {
      item.kind = DeltaItem::Kind::Hash;
      item.digest = tree.merkle().leaf(i);
    }
    batch.items.push_back(std::move(item));
    ++i;
  }
  return d;
}

std::vector<DeltaItem> make_compaction(const TimeTree& tree, std::uint64_t size, const PruneParams& prune,
                                       const NotAfterLookup& not_after) {
  if (size > tree.size()) throw Error(ErrorCode::SizeOutOfRange, "compaction range");
  const std::vector<std::uint64_t> prefix = prunable_prefix(tree, 0, size, prune, not_after);
  auto all_prunable = [&](std::uint64_t lo, std::uint64_t hi) { return prefix[hi] - prefix[lo] == hi - lo; };
  std::vector<DeltaItem> items;
  std::uint64_t i = 0;
  while (i < size) {
    if (!all_prunable(i, i + 1)) {
      ++i;
      continue;
    }
    const std::uint8_t level = cover_level(i, size, all_prunable);
    const std::uint64_t span = std::uint64_t{1} << level;
    if (level > 0) {
      items.push_back(DeltaItem{DeltaItem::Kind::Cover, level, i >> level, tree.merkle().range_hash(i, i + span), {}});
    } else if (tree.entry(i).kind == EntryKind::Revocation) {
      items.push_back(DeltaItem{DeltaItem::Kind::Hash, 0, i, tree.merkle().leaf(i), {}});
    }
    i += span;
  }
  return items;
}

}  // namespace

DeltaUpdate build_delta(const TimeTree& tree, std::uint64_t horizon, std::uint64_t to_size,
                        const SignedRoot& signed_root, const PruneParams& prune) {
  return make_delta(tree, horizon, to_size, signed_root, prune, scan_not_after(tree, to_size));
}

DeltaUpdate build_delta(const Log& log, std::uint64_t horizon, const PruneParams& prune) {
  if (!log.latest_root()) throw Error(ErrorCode::NoSignedRoot, "the log has not run an update yet");
  return make_delta(log.time_tree(), horizon, log.time_tree().size(), *log.latest_root(), prune,
                    log_not_after(log));
}

std::vector<DeltaItem> build_compaction(const TimeTree& tree, std::uint64_t size, const PruneParams& prune) {
  return make_compaction(tree, size, prune, scan_not_after(tree, size));
}

std::vector<DeltaItem> build_compaction(const Log& log, std::uint64_t size, const PruneParams& prune) {
  return make_compaction(log.time_tree(), size, prune, log_not_after(log));
}

std::uint64_t full_storage_bytes(const TimeTree& tree, std::uint64_t to_size) {
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < to_size; ++i) total += tree.entry(i).serialize().size();
  return total;
}

// ---------------------------------------------------------------------------
// LightMonitor

namespace {

// Only subtrees at least this tall are memoized.
constexpr std::uint8_t kCacheLevel = 4;

using NodeLookup = std::function<std::optional<Digest>(std::uint8_t, std::uint64_t)>;

std::uint64_t node_key(std::uint8_t level, std::uint64_t index) {
  return (static_cast<std::uint64_t>(level) << 56) | index;
}

std::optional<Digest> compute_range(std::uint64_t lo, std::uint64_t hi, const NodeLookup& lookup,
                                    std::unordered_map<std::uint64_t, Digest>* memo) {
  const std::uint64_t n = hi - lo;
  const bool aligned = std::has_single_bit(n) && lo % n == 0;
  const auto level = static_cast<std::uint8_t>(std::countr_zero(n));
  if (aligned) {
    if (auto d = lookup(level, lo >> level)) return d;
    if (n == 1) return std::nullopt;
  } else if (n == 1) {
    return lookup(0, lo);
  }
  const std::uint64_t k = std::has_single_bit(n) ? n / 2 : split_point(n);
  auto left = compute_range(lo, lo + k, lookup, memo);
  if (!left) return std::nullopt;
  auto right = compute_range(lo + k, hi, lookup, memo);
  if (!right) return std::nullopt;
  Digest h = hash_node(*left, *right);
  if (aligned && memo && level >= kCacheLevel) memo->emplace(node_key(level, lo >> level), h);
  return h;
}

}  // namespace

std::optional<Digest> LightMonitor::node(std::uint8_t level, std::uint64_t index) const {
  auto it = nodes_.find(key(level, index));
  if (it != nodes_.end()) return it->second;
  if (level >= kCacheLevel) {
    auto c = cache_.find(key(level, index));
    if (c != cache_.end()) return c->second;
  }
  return std::nullopt;
}

void LightMonitor::apply_delta(const DeltaUpdate& delta) {
  if (delta.from_size != size_ || delta.to_size < delta.from_size) {
    throw Error(ErrorCode::GapInDelta, "delta from " + std::to_string(delta.from_size) + ", state at " +
                                           std::to_string(size_));
  }
  if (!delta.signed_root.verify(log_pub_)) throw Error(ErrorCode::RootMismatch, "signed root does not verify");

  std::unordered_map<std::uint64_t, Digest> staged;
  std::vector<std::pair<std::uint64_t, TimeTreeEntry>> full;
  std::uint64_t pos = delta.from_size;
  for (const DeltaBatch& b : delta.batches) {
    for (const DeltaItem& item : b.items) {
      if (item.level > 62 || (item.kind != DeltaItem::Kind::Cover && item.level != 0)) {
        throw Error(ErrorCode::GapInDelta, "bad item level");
      }
      const std::uint64_t span = std::uint64_t{1} << item.level;
      if (item.index > (delta.to_size >> item.level) || item.index * span != pos) {
        throw Error(ErrorCode::GapInDelta, "item does not continue at leaf " + std::to_string(pos));
      }
      Digest d = item.digest;
      if (item.kind == DeltaItem::Kind::Full) {
        auto e = try_decode<TimeTreeEntry>(item.entry);
        if (!e) throw Error(ErrorCode::RootMismatch, "undecodable full entry");
        d = hash_leaf(item.entry);
        full.emplace_back(pos, std::move(*e));
      }
      staged[key(item.level, item.index)] = d;
      pos += span;
    }
  }
  if (pos != delta.to_size) throw Error(ErrorCode::GapInDelta, "delta ends at " + std::to_string(pos));

  std::unordered_map<std::uint64_t, Digest> memo;
  NodeLookup lookup = [&](std::uint8_t level, std::uint64_t index) -> std::optional<Digest> {
    if (auto it = staged.find(key(level, index)); it != staged.end()) return it->second;
    if (auto it = memo.find(key(level, index)); it != memo.end()) return it->second;
    return node(level, index);
  };
  const std::optional<Digest> root =
      delta.to_size == 0 ? std::optional<Digest>(sha256({})) : compute_range(0, delta.to_size, lookup, &memo);
  if (root != delta.signed_root.root) {
    throw Error(ErrorCode::RootMismatch, "minimized tree root differs from signed root");
  }

  for (const auto& [k, d] : staged) {
    nodes_[k] = d;
    if ((k >> 56) == 0) leaf_index_[d] = k;
  }
  for (auto& [idx, e] : full) {
    if (e.kind == EntryKind::Revocation) {
      if (auto rev = try_decode<RevocationMessage>(e.payload)) revocations_by_target_[rev->target_cert_hash].push_back(idx);
    }
    full_entries_.emplace(idx, std::move(e));
  }
  cache_.merge(memo);
  size_ = delta.to_size;
  roots_by_time_[delta.signed_root.timestamp] = delta.signed_root;
}

std::size_t LightMonitor::compact(const std::vector<DeltaItem>& items) {
  struct Span {
    std::uint64_t lo, hi;
    std::uint64_t k;
    Digest digest;
  };
  std::vector<Span> spans;
  for (const DeltaItem& item : items) {
    if (item.kind == DeltaItem::Kind::Full || item.level > 62 ||
        (item.kind == DeltaItem::Kind::Hash && item.level != 0)) {
      throw Error(ErrorCode::GapInDelta, "bad compaction item");
    }
    const std::uint64_t lo = item.index << item.level;
    const std::uint64_t hi = lo + (std::uint64_t{1} << item.level);
    if (hi > size_ || (item.index >> (63 - item.level)) != 0) throw Error(ErrorCode::GapInDelta, "item past the tree");
    if (!spans.empty() && lo < spans.back().hi) throw Error(ErrorCode::GapInDelta, "items overlap or are unordered");
    const std::uint64_t k = key(item.level, item.index);
    if (auto n = nodes_.find(k); n != nodes_.end() && n->second == item.digest && !full_entries_.contains(lo)) {
      continue;
    }
    // Ranges already folded into a coarser node cannot be recomputed; they
    // are as small as they get.
    auto h = range_hash(lo, hi);
    if (!h) continue;
    if (*h != item.digest) {
      throw Error(ErrorCode::RootMismatch, "compaction digest differs at " + std::to_string(lo));
    }
    spans.push_back(Span{lo, hi, k, item.digest});
  }
  if (spans.empty()) return 0;

  auto inside = [&](std::uint64_t node_key) {
    const auto level = static_cast<std::uint8_t>(node_key >> 56);
    const std::uint64_t index = node_key & ((std::uint64_t{1} << 56) - 1);
    const std::uint64_t lo = index << level;
    const std::uint64_t hi = (index + 1) << level;
    auto it = std::upper_bound(spans.begin(), spans.end(), lo, [](std::uint64_t v, const Span& s) { return v < s.lo; });
    if (it == spans.begin()) return false;
    --it;
    return lo >= it->lo && hi <= it->hi;
  };
  std::size_t removed = 0;
  for (auto it = nodes_.begin(); it != nodes_.end();) {
    if (!inside(it->first)) {
      ++it;
      continue;
    }
    if ((it->first >> 56) == 0) {
      auto li = leaf_index_.find(it->second);
      if (li != leaf_index_.end() && li->second == it->first) leaf_index_.erase(li);
    }
    it = nodes_.erase(it);
    ++removed;
  }
  std::erase_if(cache_, [&](const auto& kv) { return inside(kv.first); });
  for (const Span& s : spans) {
    for (auto it = full_entries_.lower_bound(s.lo); it != full_entries_.end() && it->first < s.hi;) {
      if (it->second.kind == EntryKind::Revocation) {
        if (auto rev = try_decode<RevocationMessage>(it->second.payload)) {
          auto& v = revocations_by_target_[rev->target_cert_hash];
          std::erase(v, it->first);
          if (v.empty()) revocations_by_target_.erase(rev->target_cert_hash);
        }
      }
      it = full_entries_.erase(it);
    }
    nodes_[s.k] = s.digest;
    if (s.hi - s.lo == 1) leaf_index_[s.digest] = s.k;
  }
  return removed;
}

Digest LightMonitor::root() const {
  if (size_ == 0) return sha256({});
  return *range_hash(0, size_);
}

std::optional<Digest> LightMonitor::range_hash(std::uint64_t lo, std::uint64_t hi) const {
  if (lo >= hi || hi > size_) return std::nullopt;
  NodeLookup lookup = [this](std::uint8_t level, std::uint64_t index) { return node(level, index); };
  return compute_range(lo, hi, lookup, nullptr);
}

std::optional<InclusionProof> LightMonitor::inclusion_proof(std::uint64_t index) const {
  if (index >= size_ || !nodes_.contains(key(0, index))) return std::nullopt;
  InclusionProof proof{index, size_, {}};
  std::function<bool(std::uint64_t, std::uint64_t)> walk = [&](std::uint64_t lo, std::uint64_t hi) {
    if (hi - lo == 1) return true;
    const std::uint64_t k = split_point(hi - lo);
    const bool left = index < lo + k;
    if (!(left ? walk(lo, lo + k) : walk(lo + k, hi))) return false;
    auto sibling = left ? range_hash(lo + k, hi) : range_hash(lo, lo + k);
    if (!sibling) return false;
    proof.path.push_back(*sibling);
    return true;
  };
  if (!walk(0, size_)) return std::nullopt;
  return proof;
}

bool LightMonitor::contains_entry(ByteView entry_bytes) const {
  const Digest h = hash_leaf(entry_bytes);
  auto it = leaf_index_.find(h);
  if (it == leaf_index_.end()) return false;
  auto n = nodes_.find(it->second);
  return n != nodes_.end() && n->second == h;
}

std::vector<LoggedRevocation> LightMonitor::revocations_for(const Digest& cert_hash) const {
  std::vector<LoggedRevocation> out;
  auto it = revocations_by_target_.find(cert_hash);
  if (it == revocations_by_target_.end()) return out;
  for (std::uint64_t idx : it->second) {
    const TimeTreeEntry& e = full_entries_.at(idx);
    out.push_back(LoggedRevocation{e.payload, e.reg_timestamp});
  }
  return out;
}

RootCheck LightMonitor::check_root(const SignedRoot& client_root) const {
  auto it = roots_by_time_.find(client_root.timestamp);
  if (it == roots_by_time_.end()) {
    throw Error(ErrorCode::UnknownTimestamp, "no root for " + std::to_string(client_root.timestamp));
  }
  if (it->second == client_root) return {};
  RootCheck r{false, std::nullopt};
  if (client_root.verify(log_pub_) && client_root.root != it->second.root) {
    MisbehaviorReport rep;
    rep.kind = MisbehaviorKind::ForkedRoots;
    rep.detail = "two roots for update " + std::to_string(client_root.timestamp);
    rep.roots = {it->second, client_root};
    r.fork = std::move(rep);
  }
  return r;
}

bool LightMonitor::verify_client_proof(const CertChain& chain, const std::vector<UnixTime>& root_to_leaf,
                                       const ChainPresenceProof& proof, const SignedRoot& signed_root) const {
  auto it = roots_by_time_.find(signed_root.timestamp);
  if (it == roots_by_time_.end() || it->second != signed_root) return false;
  if (!verify_chain(chain, root_to_leaf, proof, signed_root)) return false;
  const std::uint64_t idx = proof.anchor.inclusion.leaf_index;
  auto leaf = nodes_.find(key(0, idx));
  return leaf != nodes_.end() && leaf->second == proof.anchor.entry().leaf_hash();
}

std::uint64_t LightMonitor::storage_bytes() const {
  std::uint64_t total = nodes_.size() * 32;
  for (const auto& [idx, e] : full_entries_) total += e.serialize().size();
  return total;
}

bool LightMonitor::check_tiling() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
  spans.reserve(nodes_.size());
  for (const auto& [k, d] : nodes_) {
    const auto level = static_cast<std::uint8_t>(k >> 56);
    const std::uint64_t index = k & ((std::uint64_t{1} << 56) - 1);
    spans.emplace_back(index << level, (index + 1) << level);
  }
  std::sort(spans.begin(), spans.end());
  std::uint64_t pos = 0;
  for (const auto& [lo, hi] : spans) {
    if (lo != pos) return false;
    pos = hi;
  }
  return pos == size_;
}

}  // namespace pkisn
