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
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "pkisn/cert.hpp"
#include "pkisn/commitments.hpp"
#include "pkisn/log.hpp"
#include "pkisn/merkle.hpp"
#include "pkisn/rev_tree.hpp"

namespace pkisn {

enum class MisbehaviorKind : std::uint8_t {
  IncorrectCC,
  SuppressedRevocation,
  ForkedRoots,
  InvalidEntry,
  InconsistentRoot,  // signed root does not match the entries served
};
std::string_view to_string(MisbehaviorKind k);

/// Self-contained evidence; only the fields relevant to `kind` are set.
struct MisbehaviorReport {
  MisbehaviorKind kind = MisbehaviorKind::ForkedRoots;
  std::string detail;
  std::vector<SignedRoot> roots;
  std::optional<ChainCommitment> cc;
  std::optional<RevocationCommitment> rev_commitment;
  Bytes revocation;
  CertChain chain;
  std::vector<UnixTime> timestamps;  // root -> leaf
  std::optional<ChainPresenceProof> presence;
  std::optional<AbsenceProof> absence;
  std::vector<TimeTreeEntry> entries;
  std::optional<InclusionProof> inclusion;
};

/// Third-party check of a report, using nothing but its evidence and the
/// public keys.
bool verify_report(const MisbehaviorReport& report, const PublicKey& log_pub,
                   const PublicKey& vendor_pub);

class MisbehaviorError : public Error {
 public:
  MisbehaviorError(ErrorCode code, MisbehaviorReport report);
  const MisbehaviorReport& report() const { return report_; }

 private:
  MisbehaviorReport report_;
};

struct RootCheck {
  bool consistent = true;
  std::optional<MisbehaviorReport> fork;
};

/// Full replica of a log. Every synced batch is re-validated and the local
/// roots compared with the log's signed roots.
class FullMonitor {
 public:
  FullMonitor(PublicKey log_pub, PublicKey vendor_pub, std::set<Digest> trust_roots);

  /// Pulls every update past the local size. Throws MisbehaviorError with
  /// RootMismatch or InvalidEntry; the replica then stays at the last good
  /// update.
  std::size_t full_sync(LogSource& source);

  /// Throws UnknownTimestamp when no root with that timestamp was synced.
  RootCheck check_root(const SignedRoot& client_root) const;

  /// Report if the CC's promised timestamps disagree with the replica.
  std::optional<MisbehaviorReport> check_cc(const CertChain& chain, const ChainCommitment& cc) const;
  /// Report if a committed revocation is missing after its promised time.
  std::optional<MisbehaviorReport> check_revocation_commitment(
      const CertChain& chain, const RevocationMessage& rev,
      const RevocationCommitment& commitment) const;

  std::uint64_t tree_size() const { return time_tree_.size(); }
  const TimeTree& time_tree() const { return time_tree_; }
  const RevTree& rev_tree() const { return rev_tree_; }
  const std::vector<UpdateRecord>& updates() const { return updates_; }
  std::optional<SignedRoot> latest_root() const;

  /// Logged chain root -> cert for a known certificate.
  std::optional<CertChain> lineage(const Digest& cert_hash) const;
  std::optional<UnixTime> reg_timestamp(const Digest& cert_hash) const;

  struct RevokedCert {
    Digest cert_hash;
    UnixTime not_after = 0;
    std::vector<LoggedRevocation> revocations;
  };
  /// Every certificate with at least one logged revocation.
  std::vector<RevokedCert> revoked_certs() const;

  /// Presence proof served from the replica (same shape as the log's).
  ChainPresenceProof prove_chain(const std::vector<Digest>& query) const;

 private:
  struct CertRecord {
    Certificate cert;
    UnixTime reg_ts = 0;
    std::optional<Digest> parent;
    bool rk_revoked = false;
  };

  void apply_batch(const std::vector<TimeTreeEntry>& batch, const UpdateRecord& update);
  struct Rejection {
    std::size_t index = 0;
    CertChain chain;
    std::string detail;
  };
  /// Checks and applies the entries of one batch except its RevTreeRoot.
  std::optional<Rejection> admit(const std::vector<TimeTreeEntry>& batch, UnixTime ts);
  /// Rebuilds the replica from the entries of every accepted update.
  void rollback();
  RevRootAnchor anchor() const;

  PublicKey log_pub_;
  PublicKey vendor_pub_;
  std::set<Digest> trust_roots_;
  TimeTree time_tree_;
  RevTree rev_tree_;
  std::unordered_map<Digest, CertRecord> certs_;
  std::unordered_map<Digest, Digest> key_to_cert_;  // subject key id -> first cert
  std::unordered_map<Digest, Digest> revocations_;  // rev hash -> target
  std::vector<UpdateRecord> updates_;
  std::map<UnixTime, SignedRoot> roots_by_time_;
};

/// True when replaying `entries` (a complete stream from index 0) gives a
/// TimeTree root other than `root` or a RevTree root other than one of the
/// RevTreeRoot entries.
bool entries_inconsistent(const std::vector<TimeTreeEntry>& entries, const Digest& root);

struct DeltaItem {
  enum class Kind : std::uint8_t { Cover, Hash, Full };
  Kind kind = Kind::Hash;
  std::uint8_t level = 0;     // cover: subtree height; otherwise 0
  std::uint64_t index = 0;    // node index at `level`
  Digest digest;              // cover and hash
  Bytes entry;                // full: serialized TimeTreeEntry

  friend bool operator==(const DeltaItem&, const DeltaItem&) = default;
};

struct DeltaBatch {
  UnixTime ts = 0;
  std::vector<DeltaItem> items;

  friend bool operator==(const DeltaBatch&, const DeltaBatch&) = default;
};

struct DeltaUpdate {
  std::uint64_t from_size = 0;
  std::uint64_t to_size = 0;
  std::vector<DeltaBatch> batches;
  SignedRoot signed_root;

  friend bool operator==(const DeltaUpdate&, const DeltaUpdate&) = default;
};

struct PruneParams {
  UnixTime now = 0;
  /// Entries stay unpruned until not_after + grace.
  UnixTime grace = kDefaultSchedulingPeriod;
};

/// Delta covering entries [horizon, to_size). Certificates past their
/// expiry horizon, and revocations of such certificates, are prunable; any
/// maximal aligned run of prunable leaves collapses to one covering hash.
/// Uncovered revocations ship in full; every other entry as its leaf hash.
DeltaUpdate build_delta(const TimeTree& tree, std::uint64_t horizon, std::uint64_t to_size,
                        const SignedRoot& signed_root, const PruneParams& prune);
/// Delta up to the log's latest update.
DeltaUpdate build_delta(const Log& log, std::uint64_t horizon, const PruneParams& prune);

/// Maximal aligned prunable ranges of the first `size` entries as Cover
/// items, plus level-0 Hash items for lone prunable revocations. Lets a
/// monitor that received entries before they expired drop them later.
std::vector<DeltaItem> build_compaction(const TimeTree& tree, std::uint64_t size, const PruneParams& prune);
std::vector<DeltaItem> build_compaction(const Log& log, std::uint64_t size, const PruneParams& prune);

/// Minimized TimeTree fed by delta updates.
class LightMonitor {
 public:
  explicit LightMonitor(PublicKey log_pub) : log_pub_(log_pub) {}

  /// Throws GapInDelta, RootMismatch (state left unchanged) or BadSignature
  /// (as RootMismatch) for a bad signed root.
  void apply_delta(const DeltaUpdate& delta);

  /// Replaces the stored detail under each item by the item's digest, which
  /// must equal the hash recomputed from what is stored. Throws RootMismatch
  /// (state unchanged) otherwise. Returns the number of nodes dropped.
  std::size_t compact(const std::vector<DeltaItem>& items);
  std::uint64_t size() const { return size_; }
  Digest root() const;
  /// Hash of [lo, hi) from stored nodes; nullopt if a needed node was pruned.
  std::optional<Digest> range_hash(std::uint64_t lo, std::uint64_t hi) const;
  std::optional<InclusionProof> inclusion_proof(std::uint64_t index) const;

  /// Whether the exact serialized entry is a retained leaf.
  bool contains_entry(ByteView entry_bytes) const;
  std::vector<LoggedRevocation> revocations_for(const Digest& cert_hash) const;

  RootCheck check_root(const SignedRoot& client_root) const;
  /// Client-supplied presence proof checked against the minimized state.
  bool verify_client_proof(const CertChain& chain, const std::vector<UnixTime>& root_to_leaf,
                           const ChainPresenceProof& proof, const SignedRoot& signed_root) const;

  /// 32 bytes per stored node plus full entry bytes.
  std::uint64_t storage_bytes() const;
  std::size_t node_count() const { return nodes_.size(); }
  /// Stored nodes tile [0, size) with no gaps or overlaps.
  bool check_tiling() const;

 private:
  static std::uint64_t key(std::uint8_t level, std::uint64_t index) {
    return (static_cast<std::uint64_t>(level) << 56) | index;
  }
  std::optional<Digest> node(std::uint8_t level, std::uint64_t index) const;

  PublicKey log_pub_;
  std::uint64_t size_ = 0;
  std::unordered_map<std::uint64_t, Digest> nodes_;
  std::unordered_map<Digest, std::uint64_t> leaf_index_;
  std::map<std::uint64_t, TimeTreeEntry> full_entries_;
  std::unordered_map<Digest, std::vector<std::uint64_t>> revocations_by_target_;
  std::map<UnixTime, SignedRoot> roots_by_time_;
  // Complete aligned subtrees derived from stored nodes; recomputable, so
  // not counted as storage.
  std::unordered_map<std::uint64_t, Digest> cache_;
};

/// Serialized size of every entry, i.e. what a full replica stores.
std::uint64_t full_storage_bytes(const TimeTree& tree, std::uint64_t to_size);

}  // namespace pkisn
