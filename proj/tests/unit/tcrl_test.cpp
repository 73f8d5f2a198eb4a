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
#include "pkisn/monitor.hpp"
#include "pkisn/tcrl.hpp"
#include "pkisn/validator.hpp"
#include "tree_fixtures.hpp"

namespace pkisn {
namespace {

const KeyPair& vendor() {
  static const KeyPair k = KeyPair::derive(KeyRole::VendorKey, "trees/vendor");
  return k;
}

TcrlSource source(const std::string& label, UnixTime not_after, UnixTime reg) {
  return TcrlSource{hash_leaf(as_bytes(label)), not_after, {LoggedRevocation{Bytes(as_bytes(label).begin(), as_bytes(label).end()), reg}}};
}

TEST(Tcrl, ExpiredCertificatesDropped) {
  std::vector<TcrlSource> src{source("a", 100, 1), source("b", 99, 1), source("c", 500, 2)};
  Tcrl t = build_tcrl(src, vendor(), 100, 3);
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_TRUE(std::is_sorted(t.entries.begin(), t.entries.end()));
  EXPECT_EQ(t.version, 3u);
  EXPECT_EQ(t.issued_at, 100);
  EXPECT_TRUE(t.vendor_signature_valid(vendor().public_key()));
  EXPECT_TRUE(t.lookup(hash_leaf(as_bytes("b"))).empty());
}

TEST(Tcrl, SignatureCoversEntries) {
  Tcrl t = build_tcrl({source("a", 100, 1)}, vendor(), 10, 1);
  Tcrl bad = t;
  bad.entries[0].reg_ts += 1;
  EXPECT_FALSE(bad.vendor_signature_valid(vendor().public_key()));
  bad = t;
  bad.entries.clear();
  EXPECT_FALSE(bad.vendor_signature_valid(vendor().public_key()));
  EXPECT_FALSE(t.vendor_signature_valid(KeyPair::derive(KeyRole::VendorKey, "x").public_key()));
  EXPECT_NE(bad.tcrl_hash(), t.tcrl_hash());
}

TEST(Tcrl, CommitAndIncludeThroughLog) {
  testing::PresenceFixture fx = testing::build_presence_fixture();
  FullMonitor m(fx.log->public_key(), vendor().public_key(), fx.log->config().trust_roots);
  LocalLogSource src(*fx.log);
  m.full_sync(src);
  Tcrl t = build_tcrl(m, vendor(), fx.t1 + 10, 1);
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(t.entries[0].cert_hash, fx.certs.at("d").cert_hash());
  auto ev = t.lookup(fx.certs.at("d").cert_hash());
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].message, fx.rev_d);
  EXPECT_EQ(ev[0].reg_ts, fx.t1);

  EXPECT_FALSE(verify_tcrl(t, vendor().public_key(), fx.log->public_key()));
  TcrlCommitment c = commit_tcrl(*fx.log, t, vendor().public_key(), fx.t1 + 20);
  EXPECT_EQ(c.hash, t.tcrl_hash());
  EXPECT_TRUE(verify_tcrl(t, vendor().public_key(), fx.log->public_key()));
  EXPECT_FALSE(verify_tcrl(t, vendor().public_key(), fx.log->public_key(), true));
  EXPECT_THROW(attach_inclusion(*fx.log, t), Error);
  fx.log->run_update(fx.t1 + 3600);
  attach_inclusion(*fx.log, t);
  EXPECT_TRUE(verify_tcrl(t, vendor().public_key(), fx.log->public_key(), true));

  Tcrl forged = t;
  forged.vendor_signature = KeyPair::derive(KeyRole::VendorKey, "x").sign(tag::kTcrlBody, t.body_bytes());
  try {
    commit_tcrl(*fx.log, forged, vendor().public_key(), fx.t1 + 3601);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadVendorSignature);
  }
}

TEST(Tcrl, DeltaReproducesNextVersion) {
  Tcrl v1 = build_tcrl({source("a", 100, 1), source("b", 50, 1)}, vendor(), 10, 1);
  Tcrl v2 = build_tcrl({source("a", 100, 1), source("b", 50, 1), source("c", 300, 60)}, vendor(), 60, 2);
  TcrlDelta d = make_tcrl_delta(v1, v2, vendor());
  EXPECT_EQ(d.added.size(), 1u);
  EXPECT_EQ(d.removed, std::vector<Digest>{hash_leaf(as_bytes("b"))});
  Tcrl out = apply_tcrl_delta(v1, d, vendor().public_key());
  EXPECT_EQ(out.entries, v2.entries);
  EXPECT_EQ(out.tcrl_hash(), v2.tcrl_hash());
  EXPECT_THROW(apply_tcrl_delta(v2, d, vendor().public_key()), Error);
  TcrlDelta bad = d;
  bad.added[0].reg_ts += 1;
  EXPECT_THROW(apply_tcrl_delta(v1, bad, vendor().public_key()), Error);
}

TEST(Tcrl, BrowserPathAgreesWithFullProofs) {
  const testing::ScenarioFactory f;
  std::mt19937_64 rng(99);
  for (int k = 0; k < 1000; ++k) {
    testing::ChainScenario s = f.random(rng);
    Tcrl t = f.tcrl(s);
    Verdict full = is_valid(f.input(s, false));
    Verdict via = validate_with_tcrl(s.chain, s.cc, t, "leaf.test", s.now, f.trust_roots(s),
                                     f.log_key().public_key(), f.vendor_key().public_key());
    ASSERT_EQ(full.decision, via.decision) << k;
    ASSERT_EQ(full.reason, via.reason) << k;
  }
}

}  // namespace
}  // namespace pkisn
