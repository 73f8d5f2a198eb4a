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

#include "fixtures.hpp"
#include "pkisn/cert.hpp"

namespace pkisn {
namespace {

using testing::chain_of;

constexpr UnixTime kNb = 1'000'000;
constexpr UnixTime kNa = 2'000'000;

class CertModel : public ::testing::Test {
 protected:
  testing::TestPki pki{"cert", kNb};
  const PublicKey vendor = KeyPair::derive(KeyRole::VendorKey, "cert/vendor").public_key();
  Certificate root = pki.root("root", kNa);
  Certificate ca = pki.ca("ica", "root", kNa);
  Certificate leaf = pki.leaf("www.example.test", "ica", kNa - 10);
  CertChain chain = chain_of({root, ca, leaf});
};

TEST_F(CertModel, CanonicalRoundTrip) {
  for (const Certificate& c : chain.certs) {
    EXPECT_EQ(Certificate::decode(c.canonical_bytes()), c);
    EXPECT_EQ(c.cert_hash(), hash_leaf(c.canonical_bytes()));
  }
  Bytes b = leaf.canonical_bytes();
  b.pop_back();
  EXPECT_THROW(Certificate::decode(b), Error);
  b = leaf.canonical_bytes();
  b.push_back(0);
  EXPECT_THROW(Certificate::decode(b), Error);
}

TEST_F(CertModel, IssuancePolicy) {
  IssueParams p{1, "x", pki.leaf_key("x").public_key(), false, kNb, kNa, std::nullopt};
  p.revocation_public_key = pki.rk("x").public_key();
  EXPECT_THROW(issue_certificate(p, pki.ca_key("ica")), Error);
  p.revocation_public_key.reset();
  p.is_ca = true;
  EXPECT_THROW(issue_certificate(p, pki.ca_key("ica")), Error);
  p.is_ca = false;
  p.not_after = p.not_before;
  EXPECT_THROW(issue_certificate(p, pki.ca_key("ica")), Error);
  p.not_after = kNa;
  EXPECT_THROW(issue_certificate(p, pki.leaf_key("www.example.test")), Error);
  EXPECT_NO_THROW(issue_certificate(p, pki.ca_key("ica")));
}

TEST_F(CertModel, ChainLinks) {
  EXPECT_TRUE(chain_links_valid(chain, true));
  EXPECT_TRUE(chain_links_valid(chain_of({root, ca}), false));
  EXPECT_FALSE(chain_links_valid(chain_of({root, ca}), true));
  EXPECT_FALSE(chain_links_valid(chain_of({root, leaf}), false));
  EXPECT_FALSE(chain_links_valid(chain_of({ca, leaf}), false));
  Certificate forged = leaf;
  forged.not_after += 1;
  EXPECT_FALSE(chain_links_valid(chain_of({root, ca, forged}), true));
  EXPECT_EQ(chain.find(ca.cert_hash()), 1u);
  EXPECT_EQ(chain.find(Digest{}), CertChain::npos);
}

TEST_F(CertModel, PreValidateWindowIsInclusive) {
  std::set<Digest> roots{root.cert_hash()};
  const std::string name = "www.example.test";
  EXPECT_TRUE(pre_validate(chain, name, roots, kNb));
  EXPECT_TRUE(pre_validate(chain, "WWW.Example.TEST", roots, kNb + 5));
  EXPECT_TRUE(pre_validate(chain, name, roots, kNa - 10));
  EXPECT_FALSE(pre_validate(chain, name, roots, kNa - 9));
  EXPECT_FALSE(pre_validate(chain, name, roots, kNb - 1));
  EXPECT_FALSE(pre_validate(chain, "other.test", roots, kNb));
  EXPECT_FALSE(pre_validate(chain, name, {}, kNb));
  EXPECT_FALSE(pre_validate(chain_of({root, ca}), "ica.ca.test", roots, kNb));
}

TEST(RevocationPolicy, Matrix) {
  using K = RevocationKind;
  using R = SignerRole;
  EXPECT_TRUE(revocation_policy_allows(K::LeafRevoke, R::OwnKey));
  EXPECT_TRUE(revocation_policy_allows(K::LeafRevoke, R::ParentCA));
  EXPECT_TRUE(revocation_policy_allows(K::LeafRevoke, R::Vendor));
  EXPECT_FALSE(revocation_policy_allows(K::LeafRevoke, R::RevocationKey));
  EXPECT_TRUE(revocation_policy_allows(K::CaRevokeFrom, R::RevocationKey));
  EXPECT_TRUE(revocation_policy_allows(K::CaRevokeFrom, R::ParentCA));
  EXPECT_TRUE(revocation_policy_allows(K::CaRevokeFrom, R::Vendor));
  EXPECT_FALSE(revocation_policy_allows(K::CaRevokeFrom, R::OwnKey));
}

TEST_F(CertModel, RevocationSignersVerify) {
  KeyPair vendor_key = KeyPair::derive(KeyRole::VendorKey, "cert/vendor");
  auto own = make_revocation(RevocationKind::LeafRevoke, leaf, std::nullopt,
                             pki.leaf_key("www.example.test"), SignerRole::OwnKey);
  auto p1 = make_revocation(RevocationKind::LeafRevoke, leaf, std::nullopt, pki.ca_key("ica"),
                            SignerRole::ParentCA, 1);
  auto p2 = make_revocation(RevocationKind::LeafRevoke, leaf, std::nullopt, pki.ca_key("root"),
                            SignerRole::ParentCA, 2);
  auto rk = make_revocation(RevocationKind::CaRevokeFrom, ca, kNa - 5, pki.rk("ica"),
                            SignerRole::RevocationKey);
  auto vend = make_revocation(RevocationKind::CaRevokeFrom, ca, kNb, vendor_key, SignerRole::Vendor);
  EXPECT_TRUE(verify_revocation(own, leaf, chain, vendor));
  EXPECT_TRUE(verify_revocation(p1, leaf, chain, vendor));
  EXPECT_TRUE(verify_revocation(p2, leaf, chain, vendor));
  EXPECT_TRUE(verify_revocation(rk, ca, chain, vendor));
  EXPECT_TRUE(verify_revocation(vend, ca, chain, vendor));
  EXPECT_EQ(own.payload_tag(), tag::kLeafRevocation);
  EXPECT_EQ(rk.payload_tag(), tag::kCaRevocation);
  for (const auto& r : {own, p1, rk, vend}) EXPECT_EQ(RevocationMessage::decode(r.canonical_bytes()), r);

  // Depth pointing at the wrong ancestor, a signature from the wrong key,
  // and a message naming another certificate.
  auto wrong_depth = p1;
  wrong_depth.parent_depth = 2;
  EXPECT_FALSE(verify_revocation(wrong_depth, leaf, chain, vendor));
  auto too_deep = make_revocation(RevocationKind::LeafRevoke, leaf, std::nullopt, pki.ca_key("root"),
                                  SignerRole::ParentCA, 3);
  EXPECT_FALSE(verify_revocation(too_deep, leaf, chain, vendor));
  auto forged = make_revocation(RevocationKind::LeafRevoke, leaf, std::nullopt, pki.ca_key("other"),
                                SignerRole::ParentCA, 1);
  EXPECT_FALSE(verify_revocation(forged, leaf, chain, vendor));
  EXPECT_FALSE(verify_revocation(own, ca, chain, vendor));
  EXPECT_FALSE(verify_revocation(vend, ca, chain,
                                 KeyPair::derive(KeyRole::VendorKey, "x").public_key()));
  try {
    make_revocation(RevocationKind::CaRevokeFrom, ca, kNa, pki.rk("ica"), SignerRole::RevocationKey);
    FAIL() << "rev_timestamp at not_after accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TimestampAfterExpiry);
  }
}

TEST_F(CertModel, RevocationConstructionPolicy) {
  EXPECT_THROW(make_revocation(RevocationKind::LeafRevoke, leaf, std::nullopt, pki.rk("ica"),
                               SignerRole::RevocationKey),
               Error);
  EXPECT_THROW(make_revocation(RevocationKind::CaRevokeFrom, ca, std::nullopt, pki.rk("ica"),
                               SignerRole::RevocationKey),
               Error);
  EXPECT_THROW(make_revocation(RevocationKind::LeafRevoke, leaf, kNb, pki.leaf_key("www.example.test"),
                               SignerRole::OwnKey),
               Error);
  EXPECT_THROW(make_revocation(RevocationKind::LeafRevoke, leaf, std::nullopt, pki.ca_key("ica"),
                               SignerRole::ParentCA, 0),
               Error);
  EXPECT_THROW(make_revocation(RevocationKind::LeafRevoke, leaf, std::nullopt, pki.ca_key("ica"),
                               SignerRole::OwnKey),
               Error);
}

TEST(Names, ExactCaseInsensitive) {
  EXPECT_TRUE(names_match("Example.TEST", "example.test"));
  EXPECT_FALSE(names_match("example.test", "example.test."));
  EXPECT_FALSE(names_match("*.example.test", "www.example.test"));
}

}  // namespace
}  // namespace pkisn
