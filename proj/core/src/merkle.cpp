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

#include "pkisn/merkle.hpp"

#include <bit>
#include <limits>

namespace pkisn {

std::uint64_t split_point(std::uint64_t n) {
  // largest power of two strictly below n
  return std::bit_floor(n - 1);
}

MerkleTree::MerkleTree(std::vector<Digest> leaves) {
  for (const Digest& d : leaves) append(d);
}

void MerkleTree::append(const Digest& leaf_hash) {
  if (levels_.empty()) levels_.emplace_back();
  levels_[0].push_back(leaf_hash);
  for (std::size_t k = 0; levels_[k].size() % 2 == 0; ++k) {
    if (levels_.size() == k + 1) levels_.emplace_back();
    const auto& level = levels_[k];
    levels_[k + 1].push_back(hash_node(level[level.size() - 2], level.back()));
  }
}

Digest MerkleTree::range_hash(std::uint64_t lo, std::uint64_t hi) const {
  const std::uint64_t n = hi - lo;
  if (std::has_single_bit(n) && lo % n == 0) {
    return levels_[std::countr_zero(n)][lo / n];
  }
  const std::uint64_t k = split_point(n);
  return hash_node(range_hash(lo, lo + k), range_hash(lo + k, hi));
}

Digest MerkleTree::root_at(std::uint64_t n) const {
  if (n > size()) throw Error(ErrorCode::SizeOutOfRange, "tree has " + std::to_string(size()) + " leaves");
  if (n == 0) return sha256({});
  return range_hash(0, n);
}

void MerkleTree::path_into(std::uint64_t index, std::uint64_t lo, std::uint64_t hi,
                           std::vector<Digest>& out) const {
  if (hi - lo <= 1) return;
  const std::uint64_t k = split_point(hi - lo);
  if (index < lo + k) {
    path_into(index, lo, lo + k, out);
    out.push_back(range_hash(lo + k, hi));
  } else {
    path_into(index, lo + k, hi, out);
    out.push_back(range_hash(lo, lo + k));
  }
}

InclusionProof MerkleTree::inclusion_proof(std::uint64_t index, std::uint64_t tree_size) const {
  if (tree_size > size()) throw Error(ErrorCode::SizeOutOfRange, "tree_size beyond tree");
  if (index >= tree_size) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(index) + " >= size " + std::to_string(tree_size));
  }
  InclusionProof p;
  p.leaf_index = index;
  p.tree_size = tree_size;
  path_into(index, 0, tree_size, p.path);
  return p;
}

void MerkleTree::subproof_into(std::uint64_t m, std::uint64_t lo, std::uint64_t hi, bool complete,
                               std::vector<Digest>& out) const {
  const std::uint64_t n = hi - lo;
  if (m == n) {
    if (!complete) out.push_back(range_hash(lo, hi));
    return;
  }
  const std::uint64_t k = split_point(n);
  if (m <= k) {
    subproof_into(m, lo, lo + k, complete, out);
    out.push_back(range_hash(lo + k, hi));
  } else {
    subproof_into(m - k, lo + k, hi, false, out);
    out.push_back(range_hash(lo, lo + k));
  }
}

ConsistencyProof MerkleTree::consistency_proof(std::uint64_t old_size, std::uint64_t new_size) const {
  if (old_size == 0 || old_size > new_size || new_size > size()) {
    throw Error(ErrorCode::SizeOutOfRange, "need 0 < old <= new <= tree size");
  }
  ConsistencyProof p;
  p.old_size = old_size;
  p.new_size = new_size;
  if (old_size < new_size) subproof_into(old_size, 0, new_size, true, p.nodes);
  return p;
}

std::optional<Digest> root_from_inclusion(const Digest& leaf_hash, const InclusionProof& proof) {
  if (proof.leaf_index >= proof.tree_size) return std::nullopt;
  std::uint64_t fn = proof.leaf_index;
  std::uint64_t sn = proof.tree_size - 1;
  Digest r = leaf_hash;
  for (const Digest& p : proof.path) {
    if (sn == 0) return std::nullopt;
    if ((fn & 1) || fn == sn) {
      r = hash_node(p, r);
      while (!(fn & 1) && fn != 0) {
        fn >>= 1;
        sn >>= 1;
      }
    } else {
      r = hash_node(r, p);
    }
    fn >>= 1;
    sn >>= 1;
  }
  if (sn != 0) return std::nullopt;
  return r;
}

bool verify_inclusion_hash(const Digest& leaf_hash, const InclusionProof& proof, const Digest& root) {
  auto r = root_from_inclusion(leaf_hash, proof);
  return r && *r == root;
}

bool verify_inclusion(ByteView entry_bytes, const InclusionProof& proof, const Digest& root) {
  return verify_inclusion_hash(hash_leaf(entry_bytes), proof, root);
}

bool verify_consistency(const Digest& old_root, const Digest& new_root, const ConsistencyProof& proof) {
  if (proof.old_size == 0 || proof.old_size > proof.new_size) return false;
  if (proof.old_size == proof.new_size) return proof.nodes.empty() && old_root == new_root;

  std::vector<Digest> path;
  path.reserve(proof.nodes.size() + 1);
  if (std::has_single_bit(proof.old_size)) path.push_back(old_root);
  path.insert(path.end(), proof.nodes.begin(), proof.nodes.end());
  if (path.empty()) return false;

  std::uint64_t fn = proof.old_size - 1;
  std::uint64_t sn = proof.new_size - 1;
  while (fn & 1) {
    fn >>= 1;
    sn >>= 1;
  }
  Digest fr = path[0];
  Digest sr = path[0];
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Digest& c = path[i];
    if (sn == 0) return false;
    if ((fn & 1) || fn == sn) {
      fr = hash_node(c, fr);
      sr = hash_node(c, sr);
      while (!(fn & 1) && fn != 0) {
        fn >>= 1;
        sn >>= 1;
      }
    } else {
      sr = hash_node(sr, c);
    }
    fn >>= 1;
    sn >>= 1;
  }
  return fr == old_root && sr == new_root && sn == 0;
}

std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::Cert: return "cert";
    case EntryKind::Revocation: return "revocation";
    case EntryKind::RevTreeRoot: return "revtree-root";
    case EntryKind::Tcrl: return "tcrl";
  }
  return "?";
}

Bytes TimeTreeEntry::serialize() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(kind)).u64(static_cast<std::uint64_t>(reg_timestamp)).var(payload);
  return std::move(w).take();
}

TimeTreeEntry TimeTreeEntry::decode(ByteReader& r) {
  TimeTreeEntry e;
  std::uint8_t kind = r.u8();
  if (kind < 1 || kind > 4) throw Error(ErrorCode::Malformed, "entry kind");
  e.kind = static_cast<EntryKind>(kind);
  e.reg_timestamp = static_cast<UnixTime>(r.u64());
  ByteView p = r.var();
  e.payload.assign(p.begin(), p.end());
  return e;
}

TimeTreeEntry TimeTreeEntry::decode(ByteView bytes) {
  ByteReader r(bytes);
  TimeTreeEntry e = decode(r);
  r.expect_done();
  return e;
}

Digest TimeTree::append(const std::vector<TimeTreeEntry>& entries) {
  UnixTime last = entries_.empty() ? std::numeric_limits<UnixTime>::min() : entries_.back().reg_timestamp;
  for (const TimeTreeEntry& e : entries) {
    if (e.reg_timestamp < last) {
      throw Error(ErrorCode::NonMonotonicTimestamp,
                  "entry at " + std::to_string(e.reg_timestamp) + " after " + std::to_string(last));
    }
    last = e.reg_timestamp;
  }
  for (const TimeTreeEntry& e : entries) {
    tree_.append(e.leaf_hash());
    entries_.push_back(e);
  }
  return tree_.root();
}

InclusionProof TimeTree::inclusion_proof(std::uint64_t index) const { return tree_.inclusion_proof(index); }

InclusionProof TimeTree::inclusion_proof(std::uint64_t index, std::uint64_t tree_size) const {
  return tree_.inclusion_proof(index, tree_size);
}

ConsistencyProof TimeTree::consistency_proof(std::uint64_t old_size, std::uint64_t new_size) const {
  return tree_.consistency_proof(old_size, new_size);
}

}  // namespace pkisn
