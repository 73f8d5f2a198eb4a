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

#include "pkisn/bytes.hpp"
#include "pkisn/cert.hpp"
#include "pkisn/crypto.hpp"

namespace pkisn {

struct InclusionProof {
  std::uint64_t leaf_index = 0;
  std::uint64_t tree_size = 0;
  std::vector<Digest> path;  // leaf -> root

  friend bool operator==(const InclusionProof&, const InclusionProof&) = default;
};

struct ConsistencyProof {
  std::uint64_t old_size = 0;
  std::uint64_t new_size = 0;
  std::vector<Digest> nodes;

  friend bool operator==(const ConsistencyProof&, const ConsistencyProof&) = default;
};

/// Largest power of two strictly less than n (n >= 2).
std::uint64_t split_point(std::uint64_t n);

/// Append-only Merkle tree over leaf hashes. Non power-of-two sizes split at
/// the largest power of two below n. Complete aligned subtrees are cached per
/// level so root, inclusion and consistency queries cost O(log n) hashes.
class MerkleTree {
 public:
  MerkleTree() = default;
  explicit MerkleTree(std::vector<Digest> leaves);

  void append(const Digest& leaf_hash);
  std::uint64_t size() const { return levels_.empty() ? 0 : levels_[0].size(); }
  const Digest& leaf(std::uint64_t index) const { return levels_.at(0).at(index); }

  /// Root over the first n leaves. An empty tree hashes to H() as usual.
  Digest root() const { return root_at(size()); }
  Digest root_at(std::uint64_t n) const;

  InclusionProof inclusion_proof(std::uint64_t index) const { return inclusion_proof(index, size()); }
  InclusionProof inclusion_proof(std::uint64_t index, std::uint64_t tree_size) const;
  ConsistencyProof consistency_proof(std::uint64_t old_size, std::uint64_t new_size) const;

  /// Hash of leaves [lo, hi). Requires lo < hi <= size().
  Digest range_hash(std::uint64_t lo, std::uint64_t hi) const;

 private:
  void path_into(std::uint64_t index, std::uint64_t lo, std::uint64_t hi,
                 std::vector<Digest>& out) const;
  void subproof_into(std::uint64_t m, std::uint64_t lo, std::uint64_t hi, bool complete,
                     std::vector<Digest>& out) const;

  // levels_[k][i] = hash of leaves [i*2^k, (i+1)*2^k)
  std::vector<std::vector<Digest>> levels_;
};

/// Root recomputed from a leaf hash and its audit path.
std::optional<Digest> root_from_inclusion(const Digest& leaf_hash, const InclusionProof& proof);
bool verify_inclusion_hash(const Digest& leaf_hash, const InclusionProof& proof, const Digest& root);
bool verify_inclusion(ByteView entry_bytes, const InclusionProof& proof, const Digest& root);
bool verify_consistency(const Digest& old_root, const Digest& new_root, const ConsistencyProof& proof);

enum class EntryKind : std::uint8_t { Cert = 1, Revocation = 2, RevTreeRoot = 3, Tcrl = 4 };
std::string_view to_string(EntryKind k);

/// kind(1) | reg_timestamp(8) | len+payload
struct TimeTreeEntry {
  EntryKind kind = EntryKind::Cert;
  Bytes payload;
  UnixTime reg_timestamp = 0;

  Bytes serialize() const;
  static TimeTreeEntry decode(ByteView bytes);
  static TimeTreeEntry decode(ByteReader& r);
  Digest leaf_hash() const { return hash_leaf(serialize()); }

  friend bool operator==(const TimeTreeEntry&, const TimeTreeEntry&) = default;
};

/// Chronological log of every object, with full payloads.
class TimeTree {
 public:
  /// Appends a batch; reg_timestamps must be non-decreasing across calls.
  Digest append(const std::vector<TimeTreeEntry>& entries);

  std::uint64_t size() const { return tree_.size(); }
  Digest root() const { return tree_.root(); }
  Digest root_at(std::uint64_t n) const { return tree_.root_at(n); }
  const TimeTreeEntry& entry(std::uint64_t index) const { return entries_.at(index); }
  const std::vector<TimeTreeEntry>& entries() const { return entries_; }
  const MerkleTree& merkle() const { return tree_; }

  InclusionProof inclusion_proof(std::uint64_t index) const;
  InclusionProof inclusion_proof(std::uint64_t index, std::uint64_t tree_size) const;
  ConsistencyProof consistency_proof(std::uint64_t old_size, std::uint64_t new_size) const;

 private:
  MerkleTree tree_;
  std::vector<TimeTreeEntry> entries_;
};

}  // namespace pkisn
