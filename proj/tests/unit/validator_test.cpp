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
#include "oracles.hpp"
#include "pkisn/validator.hpp"

namespace pkisn {
namespace {

using oracle::ModelCert;
using oracle::ModelRev;
using testing::ChainScenario;
using testing::kBase;
using testing::kStep;
using testing::ScenarioFactory;

const ScenarioFactory& factory() {
  static const ScenarioFactory f;
  return f;
}

UnixTime at(int steps) { return kBase + kStep * steps; }

/// root CA, intermediate CA, leaf registered at steps 0, 2, 4.
ChainScenario three_level(UnixTime now) {
  ChainScenario s;
  s.certs = {ModelCert{true, at(0), at(-1), at(40)}, ModelCert{true, at(2), at(-1), at(30)},
             ModelCert{false, at(4), at(-1), at(20)}};
  s.now = now;
  s.root_ts = now;
  return s;
}

Verdict run(ChainScenario& s, bool with_pending = true) {
  factory().materialize(s);
  return is_valid(factory().input(s, with_pending));
}

TEST(Validator, UnrevokedChainSucceeds) {
  ChainScenario s = three_level(at(10));
  Verdict v = run(s);
  EXPECT_TRUE(v.ok());
  ASSERT_EQ(v.per_cert.size(), 3u);
  EXPECT_EQ(v.per_cert[2].lp, (LegitimacyPeriod{at(4), at(20), LpCause::Unrevoked, false}));
}

TEST(Validator, LegitimacyPeriodIsHalfOpen) {
  ChainScenario s = three_level(at(10));
  s.revs = {ModelRev{2, SignerRole::OwnKey, 0, std::nullopt, at(10), true, false}};
  EXPECT_EQ(run(s).reason, Reason::LeafRevoked);
  s.now = s.root_ts = at(10) - 1;
  EXPECT_TRUE(run(s).ok());
}

TEST(Validator, LeafRevocationPriority) {
  // Vendor wins over parent and own revocations even when later.
  ChainScenario s = three_level(at(12));
  s.revs = {ModelRev{2, SignerRole::Vendor, 0, std::nullopt, at(15), true, false},
            ModelRev{2, SignerRole::OwnKey, 0, std::nullopt, at(6), true, false},
            ModelRev{2, SignerRole::ParentCA, 1, std::nullopt, at(7), true, false}};
  Verdict v = run(s);
  EXPECT_TRUE(v.ok());
  EXPECT_EQ(v.per_cert[2].lp.end, at(15));
  EXPECT_EQ(v.per_cert[2].lp.cause, LpCause::VendorRev);

  // Without the vendor, the parent outranks the owner.
  s.revs.erase(s.revs.begin());
  v = run(s);
  EXPECT_EQ(v.reason, Reason::LeafRevoked);
  EXPECT_EQ(v.per_cert[2].lp.end, at(7));
  EXPECT_EQ(v.per_cert[2].lp.cause, LpCause::ParentRev);
}

TEST(Validator, CaRevocationPriority) {
  ChainScenario s = three_level(at(12));
  s.revs = {ModelRev{1, SignerRole::Vendor, 0, at(25), at(5), true, false},
            ModelRev{1, SignerRole::RevocationKey, 0, at(3), at(5), true, false}};
  Verdict v = run(s);
  EXPECT_TRUE(v.ok());
  EXPECT_EQ(v.per_cert[1].lp.end, at(25));

  // The revocation key alone pulls the end before the leaf registration.
  s.revs.erase(s.revs.begin());
  EXPECT_EQ(run(s).reason, Reason::RegOutsideParentLP);
}

TEST(Validator, ParentRevocationRequiresLegitimateIssuer) {
  // Root revokes the intermediate from step 3, after revoking itself (via
  // vendor) at step 1: the parent revocation was registered outside the
  // root's period and does not apply.
  ChainScenario s = three_level(at(12));
  s.revs = {ModelRev{1, SignerRole::ParentCA, 1, at(3), at(6), true, false},
            ModelRev{0, SignerRole::Vendor, 0, at(5), at(5), true, false}};
  Verdict v = run(s);
  EXPECT_EQ(v.per_cert[0].lp.end, at(5));
  EXPECT_EQ(v.per_cert[1].lp.end, at(30));
  auto interp = factory().interpreter(s);
  EXPECT_EQ(interp.decide(s.now).reason, v.reason);

  // Registered while the root was legitimate, the same revocation applies.
  s.revs[0].reg = at(4);
  v = run(s);
  EXPECT_EQ(v.per_cert[1].lp.end, at(3));
  EXPECT_EQ(v.reason, Reason::RegOutsideParentLP);
}

TEST(Validator, ForgedRevocationsIgnored) {
  ChainScenario s = three_level(at(10));
  s.revs = {ModelRev{2, SignerRole::Vendor, 0, std::nullopt, at(5), false, false}};
  EXPECT_TRUE(run(s).ok());
}

TEST(Validator, PendingRevocationUsesRootTimestamp) {
  ChainScenario s = three_level(at(10));
  s.root_ts = at(9);
  s.revs = {ModelRev{2, SignerRole::OwnKey, 0, std::nullopt, at(0), true, true}};
  Verdict v = run(s);
  EXPECT_EQ(v.reason, Reason::LeafRevoked);
  EXPECT_TRUE(v.pending);
  EXPECT_EQ(v.per_cert[2].lp.end, at(9));
  EXPECT_TRUE(run(s, false).ok());
}

TEST(Validator, PendingWithBadCommitmentIgnored) {
  ChainScenario s = three_level(at(10));
  s.revs = {ModelRev{2, SignerRole::OwnKey, 0, std::nullopt, at(0), true, true}};
  factory().materialize(s);
  ValidationInput in = factory().input(s);
  in.pending_revocations[0].commitment.hash.bytes[0] ^= 1;
  EXPECT_TRUE(is_valid(in).ok());
}

TEST(Validator, ExpiryAndEmptyPeriods) {
  ChainScenario s = three_level(at(20));
  EXPECT_TRUE(run(s).ok() == false);
  s.now = s.root_ts = at(20) - 1;
  EXPECT_TRUE(run(s).ok());
  // At not_after itself pre-validation still passes but the period has ended.
  s.now = s.root_ts = at(20);
  EXPECT_EQ(run(s).reason, Reason::LeafExpired);
  s.now = s.root_ts = at(3);
  EXPECT_EQ(run(s).reason, Reason::EmptyLP);
}

TEST(Validator, ProofChecks) {
  ChainScenario s = three_level(at(10));
  factory().materialize(s);
  ValidationInput in = factory().input(s);
  ASSERT_TRUE(is_valid(in).ok());

  ValidationInput t = in;
  t.now = in.signed_root.timestamp + ScenarioFactory::kMaxRootAge + 1;
  t.chain.certs[2].not_after = t.now + 10;
  EXPECT_EQ(check_proofs(t.signed_root, t.proof, in.chain, t.cc, t.log_pub, t.max_root_age, t.now),
            Reason::StaleRoot);
  t = in;
  t.signed_root.timestamp += 1;
  EXPECT_EQ(is_valid(t).reason, Reason::BadSignature);
  t = in;
  t.log_pub = KeyPair::derive(KeyRole::LogKey, "other").public_key();
  EXPECT_EQ(is_valid(t).reason, Reason::BadSignature);
  t = in;
  t.proof.levels[1].leaf_index = 1;
  EXPECT_EQ(is_valid(t).reason, Reason::ProofMismatch);
  t = in;
  t.cc = ChainCommitment::make(factory().log_key(), s.chain.leaf().cert_hash(), {at(4), at(2), at(1)});
  EXPECT_EQ(is_valid(t).reason, Reason::ProofMismatch);
  t = in;
  t.name = "other.test";
  EXPECT_EQ(is_valid(t).reason, Reason::PreValidateFail);
}

// Randomized agreement with the rule interpreter; the acceptance binary runs
// the larger sweep.
TEST(Validator, AgreesWithRuleInterpreter) {
  std::mt19937_64 rng(20260501);
  for (int k = 0; k < 1500; ++k) {
    ChainScenario s = factory().random(rng);
    Verdict v = is_valid(factory().input(s));
    oracle::ModelVerdict m = factory().interpreter(s).decide(s.now);
    ASSERT_EQ(v.decision, m.decision) << "scenario " << k;
    ASSERT_EQ(v.reason, m.reason) << "scenario " << k;
  }
}

TEST(Validator, SuccessIsContiguousInTime) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    ChainScenario s = factory().random(rng);
    int transitions = 0;
    bool prev = false;
    for (UnixTime t = at(-1); t <= at(40); t += kStep / 2) {
      ValidationInput in = factory().input(s);
      in.now = t;
      in.max_root_age = 1'000'000;
      bool ok = is_valid(in).ok();
      if (ok != prev) ++transitions;
      prev = ok;
    }
    ASSERT_LE(transitions, 2) << "scenario " << k;
  }
}

}  // namespace
}  // namespace pkisn
