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
#include "pkisn/wire.hpp"
#include "tree_fixtures.hpp"

namespace pkisn {
namespace {

template <typename T>
T round_trip(const T& v) {
  return json::parse(json(v).dump()).get<T>();
}

class Wire : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { fx = new testing::PresenceFixture(testing::build_presence_fixture()); }
  static void TearDownTestSuite() { delete fx; }
  static testing::PresenceFixture* fx;
};
testing::PresenceFixture* Wire::fx = nullptr;

TEST_F(Wire, ArtifactsRoundTrip) {
  EXPECT_EQ(round_trip(fx->chain_adm).certs, fx->chain_adm.certs);
  EXPECT_EQ(round_trip(fx->cc_adm), fx->cc_adm);
  EXPECT_EQ(round_trip(fx->rev_d), fx->rev_d);
  EXPECT_EQ(round_trip(fx->bundle.signed_root), fx->bundle.signed_root);
  EXPECT_EQ(round_trip(fx->bundle.proof), fx->bundle.proof);
  ProofBundle b = round_trip(fx->bundle);
  EXPECT_EQ(b.proof, fx->bundle.proof);
  EXPECT_EQ(b.pending, fx->bundle.pending);
  ConsistencyProof c = fx->log->get_consistency(8, 16);
  EXPECT_EQ(round_trip(c), c);
  DeltaUpdate d = build_delta(*fx->log, 0, PruneParams{fx->t1, 60});
  EXPECT_EQ(round_trip(d), d);
  for (const auto& e : fx->log->time_tree().entries()) EXPECT_EQ(round_trip(e), e);
  RevocationCommitment rc = RevocationCommitment::make(KeyPair::derive(KeyRole::LogKey, "w"), Digest{}, 5);
  EXPECT_EQ(round_trip(rc), rc);
}

TEST_F(Wire, HashesAreHexAndBytesAreBase64) {
  json j = fx->bundle.signed_root;
  EXPECT_EQ(j.at("root").get<std::string>(), fx->bundle.signed_root.root.hex());
  const Certificate& c = fx->chain_adm.certs[0];
  json cert = c;
  EXPECT_EQ(from_base64(cert.at("bytes").get<std::string>()), c.canonical_bytes());
  EXPECT_EQ(cert.at("hash").get<std::string>(), c.cert_hash().hex());
}

TEST_F(Wire, KeysRoundTrip) {
  KeyPair k = KeyPair::derive(KeyRole::RevocationKey, "wire");
  json j = key_to_json(k);
  KeyPair back = key_from_json(j);
  EXPECT_EQ(back.public_key(), k.public_key());
  EXPECT_EQ(back.role(), KeyRole::RevocationKey);
  j["public_key"] = json(KeyPair::derive(KeyRole::RevocationKey, "other").public_key());
  EXPECT_THROW(key_from_json(j), Error);
}

TEST(WireErrors, MalformedInputs) {
  auto code = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code([] { parse_json("{not json"); }), ErrorCode::Malformed);
  EXPECT_EQ(code([] { parse_as<SignedRoot>(json{{"root", "zz"}}); }), ErrorCode::Malformed);
  EXPECT_EQ(code([] { parse_as<Digest>(json("abcd")); }), ErrorCode::Malformed);
  EXPECT_EQ(code([] { parse_as<CertChain>(json::array({json{{"bytes", "AAAA"}}})); }), ErrorCode::Truncated);
}

}  // namespace
}  // namespace pkisn
