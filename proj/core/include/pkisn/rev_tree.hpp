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
#include <unordered_map>
#include <vector>

#include "pkisn/cert.hpp"
#include "pkisn/crypto.hpp"
#include "pkisn/commitments.hpp"
#include "pkisn/merkle.hpp"

namespace pkisn {

/// A revocation as stored in a RevLeaf: the message plus the time the log
/// appended it.
struct LoggedRevocation {
  Bytes bytes;  // canonical RevocationMessage
  UnixTime reg_ts = 0;

  RevocationMessage message() const { return RevocationMessage::decode(bytes); }
  friend bool operator==(const LoggedRevocation&, const LoggedRevocation&) = default;
};

/// H(C_x || t_x) identifying a registered certificate.
Digest rev_id_hash(ByteView cert_canonical_bytes, UnixTime reg_ts);

/// Root of a subtree without leaves.
Digest empty_subtree_root();

/// One RevLeaf plus its position in the enclosing subtree.
struct LevelRecord {
  Digest id_hash;
  std::vector<LoggedRevocation> revocations;
  Digest child_root;  // all-zero when the certificate has no logged children
  std::uint64_t leaf_index = 0;
  std::uint64_t subtree_size = 0;
  std::vector<Digest> path;

  /// hash_leaf(id | rev_count(2) | (len+rev | reg_ts(8))* | child_root)
  Digest leaf_hash() const;
  std::optional<Digest> subtree_root() const;

  friend bool operator==(const LevelRecord&, const LevelRecord&) = default;
};

Digest rev_leaf_hash(const Digest& id_hash, const std::vector<LoggedRevocation>& revs,
                     const Digest& child_root);

/// Binds a RevTree root to the TimeTree: the RevTreeRoot entry appended as the
/// last element of an update, with its inclusion proof.
struct RevRootAnchor {
  Digest rev_root;
  UnixTime timestamp = 0;
  InclusionProof inclusion;

  TimeTreeEntry entry() const;
  friend bool operator==(const RevRootAnchor&, const RevRootAnchor&) = default;
};

/// Presence proof for a chain, levels ordered root CA subtree -> leaf subtree.
struct ChainPresenceProof {
  std::vector<LevelRecord> levels;
  RevRootAnchor anchor;

  friend bool operator==(const ChainPresenceProof&, const ChainPresenceProof&) = default;
};

struct AbsenceProof {
  std::vector<LevelRecord> ancestors;  // presence records locating the subtree
  Digest missing;
  std::uint64_t subtree_size = 0;
  std::optional<LevelRecord> left;   // greatest id below `missing`
  std::optional<LevelRecord> right;  // smallest id above `missing`
  RevRootAnchor anchor;
};


/// Hierarchical forest mirroring the issuance hierarchy. The top subtree
/// holds root CAs; every CA leaf links the subtree of its children. Leaves of
/// each subtree are kept sorted by id_hash.
///
/// Mutations are staged (insert, add_revocation) and folded in by commit(),
/// which recomputes only the subtrees touched since the previous commit.
class RevTree {
 public:
  struct CertInput {
    Digest cert_hash;
    Bytes cert_bytes;
    UnixTime reg_ts = 0;
    std::optional<Digest> parent_cert_hash;
    std::vector<LoggedRevocation> revocations;
  };

  RevTree();

  /// Full rebuild from a registered certificate set. Throws OrphanCertificate.
  static RevTree rebuild(const std::vector<CertInput>& certs);

  /// Idempotent for an already present certificate.
  void insert(const Digest& cert_hash, ByteView cert_bytes, UnixTime reg_ts,
              const std::optional<Digest>& parent_cert_hash);
  /// Idempotent for byte-identical revocations.
  void add_revocation(const Digest& cert_hash, const LoggedRevocation& rev);

  Digest commit();
  /// Root as of the last commit.
  const Digest& root() const { return root_; }
  bool dirty() const { return !dirty_subtrees_.empty(); }

  std::size_t cert_count() const { return nodes_.size(); }
  bool contains_cert(const Digest& cert_hash) const { return by_cert_.contains(cert_hash); }
  std::optional<Digest> id_of(const Digest& cert_hash) const;
  const std::vector<LoggedRevocation>* revocations_of(const Digest& cert_hash) const;

  /// Records for `query` (id hashes root -> leaf). Throws NotFoundAtLevel
  /// (message carries the level) when a hash is not a leaf of the subtree the
  /// previous level points to. Anchor is left empty.
  std::vector<LevelRecord> prove_chain(const std::vector<Digest>& query) const;
  /// Level of the first id in `query` that is not found, or nullopt.
  std::optional<std::size_t> first_missing_level(const std::vector<Digest>& query) const;

  /// Bracketing proof that `missing` is not a leaf of the subtree reached via
  /// `level_path`. Throws ActuallyPresent / NotFoundAtLevel.
  AbsenceProof prove_absence(const std::vector<Digest>& level_path, const Digest& missing) const;

  /// Every subtree sorted strictly ascending and every cached hash current.
  bool check_invariants() const;

 private:
  struct Node {
    Digest id_hash;
    Digest cert_hash;
    std::vector<LoggedRevocation> revs;
    std::int32_t subtree = 0;
    std::int32_t child = -1;
    std::uint32_t position = 0;
    Digest leaf_hash;
    bool dirty = true;
  };
  struct Subtree {
    std::int32_t owner = -1;
    std::uint32_t depth = 0;
    std::vector<std::uint32_t> members;
    MerkleTree tree;
    Digest root;
    bool resort = false;
    bool dirty = false;
  };

  Digest child_root_of(const Node& n) const;
  void require_committed() const;
  LevelRecord record_for(std::uint32_t node) const;
  std::optional<std::uint32_t> lookup_in(std::int32_t subtree, const Digest& id) const;
  void mark_dirty(std::int32_t subtree);

  std::vector<Node> nodes_;
  std::vector<Subtree> subtrees_;
  std::unordered_map<Digest, std::uint32_t> by_id_;
  std::unordered_map<Digest, std::uint32_t> by_cert_;
  std::vector<std::int32_t> dirty_subtrees_;
  Digest root_;
};

/// Checks the per-level records of a presence proof against each other and
/// against `expected_ids` (root -> leaf); returns the recomputed top-level
/// RevTree root on success.
std::optional<Digest> fold_chain_levels(const std::vector<LevelRecord>& levels,
                                        const std::vector<Digest>& expected_ids);

/// Full chain check: id hashes match the certs and timestamps (root -> leaf),
/// hierarchical chaining holds, the RevTree root is the last TimeTree entry
/// and the TimeTree root equals signed_root.root. Does not check signatures
/// on the signed root.
bool verify_chain(const CertChain& chain, const std::vector<UnixTime>& timestamps_root_to_leaf,
                  const ChainPresenceProof& proof, const SignedRoot& signed_root);

bool verify_anchor(const RevRootAnchor& anchor, const SignedRoot& signed_root);
bool verify_absence(const AbsenceProof& proof, const SignedRoot& signed_root);

}  // namespace pkisn
