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

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "golden.hpp"
#include "oracles.hpp"
#include "pkisn/rev_tree.hpp"
#include "tree_fixtures.hpp"

namespace pkisn {
namespace {

using testing::PresenceFixture;

class PresenceProofFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { fx = new PresenceFixture(testing::build_presence_fixture()); }
  static void TearDownTestSuite() { delete fx; }

  static Digest id(const std::string& n) {
    return rev_id_hash(fx->certs.at(n).canonical_bytes(), fx->reg.at(n));
  }
  static LevelRecord record(std::vector<std::string> names) {
    std::vector<Digest> q;
    for (const auto& n : names) q.push_back(id(n));
    return fx->log->rev_tree().prove_chain(q).back();
  }
  static Digest entry_hash(std::uint64_t i) { return fx->log->time_tree().entry(i).leaf_hash(); }

  static PresenceFixture* fx;
};
PresenceFixture* PresenceProofFixture::fx = nullptr;

TEST_F(PresenceProofFixture, SubtreeOrdering) {
  EXPECT_LT(id("b"), id("a"));
  EXPECT_LT(id("a"), id("c"));
  EXPECT_LT(id("e"), id("d"));
  EXPECT_LT(id("d"), id("f"));
  EXPECT_LT(id("k"), id("m"));
  EXPECT_LT(id("m"), id("g"));
  EXPECT_LT(id("g"), id("j"));
  EXPECT_TRUE(fx->log->rev_tree().check_invariants());
}

TEST_F(PresenceProofFixture, ChainCommitment) {
  EXPECT_EQ(fx->cc_adm.timestamps, (std::vector<UnixTime>{fx->t1, fx->t0, fx->t0}));
  EXPECT_TRUE(fx->cc_adm.verify(fx->log->public_key()));
}

TEST_F(PresenceProofFixture, RootLevel) {
  const LevelRecord& a = fx->bundle.proof.levels.at(0);
  EXPECT_EQ(a.id_hash, id("a"));
  EXPECT_TRUE(a.revocations.empty());
  EXPECT_EQ(a.leaf_index, 1u);
  EXPECT_EQ(a.subtree_size, 3u);
  EXPECT_EQ(a.path, (std::vector<Digest>{record({"b"}).leaf_hash(), record({"c"}).leaf_hash()}));
}

TEST_F(PresenceProofFixture, IntermediateLevelCarriesRevocation) {
  const LevelRecord& d = fx->bundle.proof.levels.at(1);
  EXPECT_EQ(d.id_hash, id("d"));
  ASSERT_EQ(d.revocations.size(), 1u);
  EXPECT_EQ(d.revocations[0].bytes, fx->rev_d.canonical_bytes());
  EXPECT_EQ(d.revocations[0].reg_ts, fx->t1);
  EXPECT_EQ(d.leaf_index, 1u);
  EXPECT_EQ(d.subtree_size, 3u);
  EXPECT_EQ(d.path, (std::vector<Digest>{record({"a", "e"}).leaf_hash(), record({"a", "f"}).leaf_hash()}));
}

TEST_F(PresenceProofFixture, LeafLevel) {
  const LevelRecord& m = fx->bundle.proof.levels.at(2);
  EXPECT_EQ(m.id_hash, id("m"));
  EXPECT_TRUE(m.revocations.empty());
  EXPECT_TRUE(m.child_root.is_zero());
  EXPECT_EQ(m.leaf_index, 1u);
  EXPECT_EQ(m.subtree_size, 4u);
  Digest g = record({"a", "d", "g"}).leaf_hash();
  Digest j = record({"a", "d", "j"}).leaf_hash();
  EXPECT_EQ(m.path, (std::vector<Digest>{record({"a", "d", "k"}).leaf_hash(), hash_node(g, j)}));
  EXPECT_EQ(fx->bundle.proof.levels[1].child_root, *m.subtree_root());
}

TEST_F(PresenceProofFixture, Anchor) {
  const RevRootAnchor& an = fx->bundle.proof.anchor;
  const TimeTree& tt = fx->log->time_tree();
  EXPECT_EQ(an.timestamp, fx->t1);
  EXPECT_EQ(an.rev_root, fx->log->rev_tree().root());
  EXPECT_EQ(an.inclusion.leaf_index, 15u);
  EXPECT_EQ(an.inclusion.tree_size, 16u);
  EXPECT_EQ(tt.entry(14).kind, EntryKind::Cert);
  EXPECT_EQ(tt.entry(14).payload, fx->certs.at("m").canonical_bytes());
  EXPECT_EQ(an.inclusion.path, (std::vector<Digest>{entry_hash(14), hash_node(entry_hash(12), entry_hash(13)),
                                                    tt.merkle().range_hash(8, 12), tt.root_at(8)}));
  EXPECT_EQ(fx->bundle.signed_root.root, tt.root());
  EXPECT_EQ(fx->bundle.signed_root.timestamp, fx->t1);
}

TEST_F(PresenceProofFixture, VerifiesAndMatchesReferenceForest) {
  const ChainPresenceProof& p = fx->bundle.proof;
  EXPECT_TRUE(verify_chain(fx->chain_adm, fx->cc_adm.root_to_leaf(), p, fx->bundle.signed_root));
  std::vector<oracle::ForestCert> forest;
  for (const auto& [name, c] : fx->certs) {
    oracle::ForestCert f{c.cert_hash(), c.canonical_bytes(), fx->reg.at(name), std::nullopt, {}};
    if (!c.self_signed()) {
      for (const auto& [pn, pc] : fx->certs) {
        if (pc.subject_public_key.key_id() == c.issuer_key_id) f.parent = pc.cert_hash();
      }
    }
    if (name == "d") f.revocations.push_back({fx->rev_d.canonical_bytes(), fx->t1});
    forest.push_back(f);
  }
  EXPECT_EQ(oracle::forest_root(forest), p.anchor.rev_root);
  EXPECT_EQ(fold_chain_levels(p.levels, {id("a"), id("d"), id("m")}), p.anchor.rev_root);
}

TEST_F(PresenceProofFixture, GoldenDigests) {
  namespace g = testing::golden;
  const ChainPresenceProof& p = fx->bundle.proof;
  EXPECT_EQ(p.levels[0].leaf_hash().hex(), g::kLeafA);
  EXPECT_EQ(p.levels[1].leaf_hash().hex(), g::kLeafD);
  EXPECT_EQ(p.levels[2].leaf_hash().hex(), g::kLeafM);
  EXPECT_EQ(p.anchor.rev_root.hex(), g::kRevRoot);
  EXPECT_EQ(fx->bundle.signed_root.root.hex(), g::kTimeRoot);
}

TEST_F(PresenceProofFixture, TamperedRecordsFail) {
  const ChainPresenceProof& good = fx->bundle.proof;
  const SignedRoot& sr = fx->bundle.signed_root;
  auto ts = fx->cc_adm.root_to_leaf();
  auto fails = [&](const ChainPresenceProof& p) { return !verify_chain(fx->chain_adm, ts, p, sr); };

  ChainPresenceProof p = good;
  p.levels[1].revocations.clear();
  EXPECT_TRUE(fails(p));
  p = good;
  p.levels[1].revocations[0].reg_ts += 1;
  EXPECT_TRUE(fails(p));
  p = good;
  p.levels[2].path[0].bytes[0] ^= 1;
  EXPECT_TRUE(fails(p));
  p = good;
  p.levels[0].leaf_index = 0;
  EXPECT_TRUE(fails(p));
  p = good;
  p.levels[1].child_root.bytes[31] ^= 1;
  EXPECT_TRUE(fails(p));
  p = good;
  p.anchor.timestamp -= 1;
  EXPECT_TRUE(fails(p));
  p = good;
  p.anchor.inclusion.path[2].bytes[4] ^= 1;
  EXPECT_TRUE(fails(p));
  p = good;
  std::swap(p.levels[0], p.levels[1]);
  EXPECT_TRUE(fails(p));
  p = good;
  p.levels.pop_back();
  EXPECT_TRUE(fails(p));

  auto wrong_ts = ts;
  wrong_ts[2] += 1;
  EXPECT_FALSE(verify_chain(fx->chain_adm, wrong_ts, good, sr));
  SignedRoot other = sr;
  other.root.bytes[0] ^= 1;
  EXPECT_FALSE(verify_chain(fx->chain_adm, ts, good, other));
}

TEST_F(PresenceProofFixture, AbsenceOfUnknownLeaf) {
  const RevTree& rt = fx->log->rev_tree();
  Digest missing = hash_leaf(as_bytes("not registered"));
  AbsenceProof ab = rt.prove_absence({id("a"), id("d")}, missing);
  ab.anchor = fx->bundle.proof.anchor;
  EXPECT_TRUE(verify_absence(ab, fx->bundle.signed_root));
  EXPECT_THROW(rt.prove_absence({id("a"), id("d")}, id("m")), Error);
  AbsenceProof forged = ab;
  forged.missing = id("g");
  EXPECT_FALSE(verify_absence(forged, fx->bundle.signed_root));
  try {
    fx->log->get_proof({id("a"), id("d"), missing});
    FAIL();
  } catch (const UnknownLeafError& e) {
    EXPECT_EQ(e.level(), 2u);
    EXPECT_TRUE(verify_absence(e.absence(), fx->bundle.signed_root));
  }
}

TEST(RevTree, EmptyTreeRoot) {
  RevTree t;
  EXPECT_EQ(t.commit(), empty_subtree_root());
  EXPECT_EQ(empty_subtree_root(), hash_leaf(from_hex("02")));
}

TEST(RevTree, LeafHashLayout) {
  Digest id = hash_leaf(as_bytes("id"));
  LoggedRevocation r{from_hex("abcd"), 0x10};
  ByteWriter w;
  w.raw(id.view()).u16(1).u32(2).raw(from_hex("abcd")).u64(0x10).raw(Digest::zero().view());
  EXPECT_EQ(rev_leaf_hash(id, {r}, Digest::zero()), hash_leaf(w.bytes()));
  EXPECT_EQ(rev_id_hash(as_bytes("c"), 7), hash_leaf(ByteWriter().raw(as_bytes("c")).u64(7).bytes()));
}

// Random forests compared against the reference rebuild.
class RandomForest : public ::testing::TestWithParam<int> {};

TEST_P(RandomForest, IncrementalMatchesRebuild) {
  std::mt19937_64 rng(GetParam());
  std::vector<oracle::ForestCert> certs;
  RevTree tree;
  const std::size_t n = 50 + rng() % 250;
  UnixTime ts = 1000;
  for (std::size_t i = 0; i < n; ++i) {
    oracle::ForestCert c;
    Bytes bytes(8 + rng() % 40);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    c.bytes = bytes;
    c.cert_hash = hash_leaf(bytes);
    c.reg_ts = ts;
    if (!certs.empty() && rng() % 5 != 0) c.parent = certs[rng() % certs.size()].cert_hash;
    tree.insert(c.cert_hash, c.bytes, c.reg_ts, c.parent);
    certs.push_back(c);
    if (rng() % 10 == 0) {
      auto& target = certs[rng() % certs.size()];
      LoggedRevocation r{Bytes{static_cast<std::uint8_t>(rng()), 1, 2}, ts};
      target.revocations.push_back(r);
      tree.add_revocation(target.cert_hash, r);
    }
    if (rng() % 17 == 0) {
      ts += 10;
      ASSERT_EQ(tree.commit(), oracle::forest_root(certs));
    }
  }
  ASSERT_EQ(tree.commit(), oracle::forest_root(certs));
  EXPECT_TRUE(tree.check_invariants());

  std::vector<RevTree::CertInput> inputs;
  for (const auto& c : certs) inputs.push_back({c.cert_hash, c.bytes, c.reg_ts, c.parent, c.revocations});
  RevTree rebuilt = RevTree::rebuild(inputs);
  EXPECT_EQ(rebuilt.root(), tree.root());

  // Every certificate proves against the root through its lineage.
  std::unordered_map<Digest, const oracle::ForestCert*> by_hash;
  for (const auto& c : certs) by_hash[c.cert_hash] = &c;
  for (std::size_t k = 0; k < certs.size(); k += 7) {
    std::vector<Digest> q;
    for (const oracle::ForestCert* c = &certs[k]; c; c = c->parent ? by_hash.at(*c->parent) : nullptr) {
      q.insert(q.begin(), oracle::rev_id(c->bytes, c->reg_ts));
    }
    auto levels = tree.prove_chain(q);
    EXPECT_EQ(levels.back().revocations, certs[k].revocations);
    EXPECT_EQ(fold_chain_levels(levels, q), tree.root());
    EXPECT_THROW(tree.prove_absence(std::vector<Digest>(q.begin(), q.end() - 1), q.back()), Error);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomForest, ::testing::Range(1, 9));

TEST(RevTree, OrphanRejectedAndIdempotentInsert) {
  RevTree t;
  Digest h = hash_leaf(as_bytes("x"));
  t.insert(h, as_bytes("x"), 1, std::nullopt);
  t.insert(h, as_bytes("x"), 1, std::nullopt);
  t.commit();
  EXPECT_EQ(t.cert_count(), 1u);
  std::vector<RevTree::CertInput> orphan{{hash_leaf(as_bytes("y")), from_hex("79"), 1, h, {}}};
  try {
    RevTree::rebuild(orphan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrphanCertificate);
  }
}

}  // namespace
}  // namespace pkisn
