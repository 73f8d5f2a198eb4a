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

#include "pkisn/rev_tree.hpp"

#include <algorithm>
#include <queue>

namespace pkisn {

Digest rev_id_hash(ByteView cert_canonical_bytes, UnixTime reg_ts) {
  ByteWriter w;
  w.raw(cert_canonical_bytes).u64(static_cast<std::uint64_t>(reg_ts));
  return hash_leaf(w.bytes());
}

Digest empty_subtree_root() {
  static const Digest marker = [] {
    const std::uint8_t tag = 0x02;
    return hash_leaf(ByteView(&tag, 1));
  }();
  return marker;
}

Digest rev_leaf_hash(const Digest& id_hash, const std::vector<LoggedRevocation>& revs,
                     const Digest& child_root) {
  ByteWriter w;
  w.raw(id_hash.bytes).u16(static_cast<std::uint16_t>(revs.size()));
  for (const LoggedRevocation& r : revs) w.var(r.bytes).u64(static_cast<std::uint64_t>(r.reg_ts));
  w.raw(child_root.bytes);
  return hash_leaf(w.bytes());
}

Digest LevelRecord::leaf_hash() const { return rev_leaf_hash(id_hash, revocations, child_root); }

std::optional<Digest> LevelRecord::subtree_root() const {
  return root_from_inclusion(leaf_hash(), InclusionProof{leaf_index, subtree_size, path});
}

TimeTreeEntry RevRootAnchor::entry() const {
  return TimeTreeEntry{EntryKind::RevTreeRoot, Bytes(rev_root.bytes.begin(), rev_root.bytes.end()),
                       timestamp};
}

RevTree::RevTree() : root_(empty_subtree_root()) {
  subtrees_.push_back(Subtree{});
  subtrees_[0].root = empty_subtree_root();
}

RevTree RevTree::rebuild(const std::vector<CertInput>& certs) {
  RevTree t;
  std::vector<const CertInput*> remaining;
  remaining.reserve(certs.size());
  for (const CertInput& c : certs) remaining.push_back(&c);
  while (!remaining.empty()) {
    std::vector<const CertInput*> next;
    for (const CertInput* c : remaining) {
      if (c->parent_cert_hash && !t.contains_cert(*c->parent_cert_hash)) {
        next.push_back(c);
        continue;
      }
      t.insert(c->cert_hash, c->cert_bytes, c->reg_ts, c->parent_cert_hash);
    }
    if (next.size() == remaining.size()) {
      throw Error(ErrorCode::OrphanCertificate,
                  "parent of " + next.front()->cert_hash.hex() + " is not registered");
    }
    remaining = std::move(next);
  }
  for (const CertInput& c : certs) {
    for (const LoggedRevocation& r : c.revocations) t.add_revocation(c.cert_hash, r);
  }
  t.commit();
  return t;
}

void RevTree::mark_dirty(std::int32_t subtree) {
  Subtree& s = subtrees_[subtree];
  if (!s.dirty) {
    s.dirty = true;
    dirty_subtrees_.push_back(subtree);
  }
}

void RevTree::insert(const Digest& cert_hash, ByteView cert_bytes, UnixTime reg_ts,
                     const std::optional<Digest>& parent_cert_hash) {
  if (by_cert_.contains(cert_hash)) return;
  std::int32_t subtree = 0;
  if (parent_cert_hash) {
    auto it = by_cert_.find(*parent_cert_hash);
    if (it == by_cert_.end()) {
      throw Error(ErrorCode::OrphanCertificate, "parent " + parent_cert_hash->hex() + " not registered");
    }
    const std::uint32_t parent = it->second;
    if (nodes_[parent].child < 0) {
      Subtree s;
      s.owner = static_cast<std::int32_t>(parent);
      s.depth = subtrees_[nodes_[parent].subtree].depth + 1;
      subtrees_.push_back(std::move(s));
      nodes_[parent].child = static_cast<std::int32_t>(subtrees_.size() - 1);
      nodes_[parent].dirty = true;
      mark_dirty(nodes_[parent].subtree);
    }
    subtree = nodes_[parent].child;
  }
  Node n;
  n.id_hash = rev_id_hash(cert_bytes, reg_ts);
  n.cert_hash = cert_hash;
  n.subtree = subtree;
  const auto idx = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(n);
  by_id_.emplace(n.id_hash, idx);
  by_cert_.emplace(cert_hash, idx);
  subtrees_[subtree].members.push_back(idx);
  subtrees_[subtree].resort = true;
  mark_dirty(subtree);
}

void RevTree::add_revocation(const Digest& cert_hash, const LoggedRevocation& rev) {
  auto it = by_cert_.find(cert_hash);
  if (it == by_cert_.end()) throw Error(ErrorCode::TargetNotLogged, cert_hash.hex());
  Node& n = nodes_[it->second];
  if (std::find(n.revs.begin(), n.revs.end(), rev) != n.revs.end()) return;
  auto pos = std::upper_bound(n.revs.begin(), n.revs.end(), rev.reg_ts,
                              [](UnixTime t, const LoggedRevocation& r) { return t < r.reg_ts; });
  n.revs.insert(pos, rev);
  n.dirty = true;
  mark_dirty(n.subtree);
}

Digest RevTree::child_root_of(const Node& n) const {
  return n.child < 0 ? Digest::zero() : subtrees_[n.child].root;
}

Digest RevTree::commit() {
  auto deeper = [this](std::int32_t a, std::int32_t b) { return subtrees_[a].depth < subtrees_[b].depth; };
  std::priority_queue<std::int32_t, std::vector<std::int32_t>, decltype(deeper)> work(deeper);
  for (std::int32_t s : dirty_subtrees_) work.push(s);
  dirty_subtrees_.clear();

  while (!work.empty()) {
    const std::int32_t si = work.top();
    work.pop();
    Subtree& s = subtrees_[si];
    if (!s.dirty) continue;
    s.dirty = false;
    if (s.resort) {
      std::sort(s.members.begin(), s.members.end(),
                [this](std::uint32_t a, std::uint32_t b) { return nodes_[a].id_hash < nodes_[b].id_hash; });
      s.resort = false;
    }
    std::vector<Digest> leaves;
    leaves.reserve(s.members.size());
    for (std::uint32_t pos = 0; pos < s.members.size(); ++pos) {
      Node& n = nodes_[s.members[pos]];
      n.position = pos;
      if (n.dirty) {
        n.leaf_hash = rev_leaf_hash(n.id_hash, n.revs, child_root_of(n));
        n.dirty = false;
      }
      leaves.push_back(n.leaf_hash);
    }
    s.tree = MerkleTree(std::move(leaves));
    const Digest new_root = s.members.empty() ? empty_subtree_root() : s.tree.root();
    if (new_root != s.root) {
      s.root = new_root;
      if (s.owner >= 0) {
        Node& owner = nodes_[s.owner];
        owner.dirty = true;
        Subtree& parent = subtrees_[owner.subtree];
        if (!parent.dirty) {
          parent.dirty = true;
          work.push(owner.subtree);
        }
      }
    }
  }
  root_ = subtrees_[0].root;
  return root_;
}

void RevTree::require_committed() const {
  if (!dirty_subtrees_.empty()) throw std::logic_error("RevTree queried with uncommitted changes");
}

std::optional<Digest> RevTree::id_of(const Digest& cert_hash) const {
  auto it = by_cert_.find(cert_hash);
  if (it == by_cert_.end()) return std::nullopt;
  return nodes_[it->second].id_hash;
}

const std::vector<LoggedRevocation>* RevTree::revocations_of(const Digest& cert_hash) const {
  auto it = by_cert_.find(cert_hash);
  return it == by_cert_.end() ? nullptr : &nodes_[it->second].revs;
}

std::optional<std::uint32_t> RevTree::lookup_in(std::int32_t subtree, const Digest& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end() || nodes_[it->second].subtree != subtree) return std::nullopt;
  return it->second;
}

LevelRecord RevTree::record_for(std::uint32_t node) const {
  const Node& n = nodes_[node];
  const Subtree& s = subtrees_[n.subtree];
  LevelRecord rec;
  rec.id_hash = n.id_hash;
  rec.revocations = n.revs;
  rec.child_root = child_root_of(n);
  rec.leaf_index = n.position;
  rec.subtree_size = s.members.size();
  rec.path = s.tree.inclusion_proof(n.position).path;
  return rec;
}

std::optional<std::size_t> RevTree::first_missing_level(const std::vector<Digest>& query) const {
  std::int32_t subtree = 0;
  for (std::size_t k = 0; k < query.size(); ++k) {
    if (subtree < 0) return k;
    auto node = lookup_in(subtree, query[k]);
    if (!node) return k;
    subtree = nodes_[*node].child;
  }
  return std::nullopt;
}

std::vector<LevelRecord> RevTree::prove_chain(const std::vector<Digest>& query) const {
  require_committed();
  if (auto missing = first_missing_level(query)) {
    throw Error(ErrorCode::NotFoundAtLevel, std::to_string(*missing));
  }
  std::vector<LevelRecord> out;
  out.reserve(query.size());
  std::int32_t subtree = 0;
  for (const Digest& id : query) {
    const std::uint32_t node = *lookup_in(subtree, id);
    out.push_back(record_for(node));
    subtree = nodes_[node].child;
  }
  return out;
}

AbsenceProof RevTree::prove_absence(const std::vector<Digest>& level_path, const Digest& missing) const {
  require_committed();
  AbsenceProof proof;
  proof.missing = missing;
  std::int32_t subtree = 0;
  for (std::size_t k = 0; k < level_path.size(); ++k) {
    auto node = subtree < 0 ? std::nullopt : lookup_in(subtree, level_path[k]);
    if (!node) throw Error(ErrorCode::NotFoundAtLevel, std::to_string(k));
    proof.ancestors.push_back(record_for(*node));
    subtree = nodes_[*node].child;
  }
  if (subtree < 0) return proof;  // childless CA: child_root is all-zero
  if (lookup_in(subtree, missing)) throw Error(ErrorCode::ActuallyPresent, missing.hex());

  const Subtree& s = subtrees_[subtree];
  proof.subtree_size = s.members.size();
  auto it = std::lower_bound(s.members.begin(), s.members.end(), missing,
                             [this](std::uint32_t n, const Digest& d) { return nodes_[n].id_hash < d; });
  const auto pos = static_cast<std::size_t>(it - s.members.begin());
  if (pos > 0) proof.left = record_for(s.members[pos - 1]);
  if (pos < s.members.size()) proof.right = record_for(s.members[pos]);
  return proof;
}

bool RevTree::check_invariants() const {
  if (!dirty_subtrees_.empty()) return false;
  for (const Subtree& s : subtrees_) {
    for (std::size_t i = 0; i < s.members.size(); ++i) {
      const Node& n = nodes_[s.members[i]];
      if (n.position != i) return false;
      if (i > 0 && !(nodes_[s.members[i - 1]].id_hash < n.id_hash)) return false;
      if (n.leaf_hash != rev_leaf_hash(n.id_hash, n.revs, child_root_of(n))) return false;
      if (s.tree.leaf(i) != n.leaf_hash) return false;
    }
    const Digest expect = s.members.empty() ? empty_subtree_root() : s.tree.root();
    if (expect != s.root) return false;
  }
  return root_ == subtrees_[0].root;
}

std::optional<Digest> fold_chain_levels(const std::vector<LevelRecord>& levels,
                                        const std::vector<Digest>& expected_ids) {
  if (levels.empty() || levels.size() != expected_ids.size()) return std::nullopt;
  std::optional<Digest> top;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k].id_hash != expected_ids[k]) return std::nullopt;
    auto root = levels[k].subtree_root();
    if (!root) return std::nullopt;
    if (k == 0) {
      top = root;
    } else if (*root != levels[k - 1].child_root) {
      return std::nullopt;
    }
  }
  return top;
}

bool verify_anchor(const RevRootAnchor& anchor, const SignedRoot& signed_root) {
  if (anchor.timestamp != signed_root.timestamp) return false;
  if (anchor.inclusion.tree_size == 0 || anchor.inclusion.leaf_index + 1 != anchor.inclusion.tree_size) {
    return false;
  }
  return verify_inclusion(anchor.entry().serialize(), anchor.inclusion, signed_root.root);
}

bool verify_chain(const CertChain& chain, const std::vector<UnixTime>& timestamps_root_to_leaf,
                  const ChainPresenceProof& proof, const SignedRoot& signed_root) {
  if (chain.empty() || chain.size() != timestamps_root_to_leaf.size()) return false;
  std::vector<Digest> ids;
  ids.reserve(chain.size());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    ids.push_back(rev_id_hash(chain.certs[k].canonical_bytes(), timestamps_root_to_leaf[k]));
  }
  auto top = fold_chain_levels(proof.levels, ids);
  if (!top || *top != proof.anchor.rev_root) return false;
  return verify_anchor(proof.anchor, signed_root);
}

bool verify_absence(const AbsenceProof& proof, const SignedRoot& signed_root) {
  if (!verify_anchor(proof.anchor, signed_root)) return false;

  Digest subtree_root = proof.anchor.rev_root;
  if (!proof.ancestors.empty()) {
    std::vector<Digest> ids;
    for (const LevelRecord& r : proof.ancestors) ids.push_back(r.id_hash);
    auto top = fold_chain_levels(proof.ancestors, ids);
    if (!top || *top != proof.anchor.rev_root) return false;
    subtree_root = proof.ancestors.back().child_root;
    if (subtree_root.is_zero()) {
      return proof.subtree_size == 0 && !proof.left && !proof.right;
    }
  }
  if (subtree_root == empty_subtree_root()) {
    return proof.subtree_size == 0 && !proof.left && !proof.right;
  }
  if (proof.subtree_size == 0 || (!proof.left && !proof.right)) return false;

  auto bracket_ok = [&](const LevelRecord& r) {
    auto root = r.subtree_root();
    return r.subtree_size == proof.subtree_size && root && *root == subtree_root;
  };
  if (proof.left && (!bracket_ok(*proof.left) || !(proof.left->id_hash < proof.missing))) return false;
  if (proof.right && (!bracket_ok(*proof.right) || !(proof.missing < proof.right->id_hash))) return false;
  if (proof.left && proof.right) return proof.right->leaf_index == proof.left->leaf_index + 1;
  if (proof.left) return proof.left->leaf_index + 1 == proof.subtree_size;
  return proof.right->leaf_index == 0;
}

}  // namespace pkisn
