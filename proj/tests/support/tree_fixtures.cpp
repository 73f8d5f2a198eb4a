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

#include "tree_fixtures.hpp"

#include <functional>

namespace pkisn::testing {

namespace {

constexpr UnixTime kStart = 1'500'000'000;
constexpr UnixTime kPeriod = 3600;

struct Issuer {
  std::map<std::string, KeyPair> keys;

  const KeyPair& key(const std::string& name, KeyRole role = KeyRole::StandardCA) {
    auto it = keys.find(name);
    if (it == keys.end()) it = keys.emplace(name, KeyPair::derive(role, "trees/" + name)).first;
    return it->second;
  }

  /// Issues `name` under `issuer` (self-signed when empty), bumping the
  /// serial until `accept` holds for the RevTree id at `reg_ts`.
  Certificate issue(const std::string& name, const std::string& issuer, bool ca, UnixTime not_after,
                    UnixTime reg_ts, const std::function<bool(const Digest&)>& accept = {}) {
    IssueParams p;
    p.subject_name = name + ".test";
    p.subject_public_key = key(name, ca ? KeyRole::StandardCA : KeyRole::StandardLeaf).public_key();
    p.is_ca = ca;
    p.not_before = kStart - 86400;
    p.not_after = not_after;
    if (ca) p.revocation_public_key = rk(name).public_key();
    const KeyPair& signer = key(issuer.empty() ? name : issuer);
    for (p.serial = 1;; ++p.serial) {
      Certificate c = issue_certificate(p, signer);
      if (!accept || accept(rev_id_hash(c.canonical_bytes(), reg_ts))) return c;
    }
  }

  const KeyPair& rk(const std::string& name) { return key("rk-" + name, KeyRole::RevocationKey); }
};

CertChain chain_of(std::initializer_list<const Certificate*> certs) {
  CertChain ch;
  for (const Certificate* c : certs) ch.certs.push_back(*c);
  return ch;
}

}  // namespace

PresenceFixture build_presence_fixture() {
  PresenceFixture f;
  f.t0 = kStart + kPeriod;
  f.t1 = kStart + 2 * kPeriod;
  Issuer is;
  const UnixTime far = kStart + 5 * 365 * 86400;
  auto& c = f.certs;
  auto id = [&](const std::string& n, UnixTime t) { return rev_id_hash(c.at(n).canonical_bytes(), t); };

  c.emplace("a", is.issue("a", "", true, far, f.t0));
  c.emplace("b", is.issue("b", "", true, far, f.t0, [&](const Digest& h) { return h < id("a", f.t0); }));
  c.emplace("c", is.issue("c", "", true, far, f.t0, [&](const Digest& h) { return h > id("a", f.t0); }));
  c.emplace("d", is.issue("d", "a", true, far, f.t0));
  c.emplace("e", is.issue("e", "a", true, far, f.t0, [&](const Digest& h) { return h < id("d", f.t0); }));
  c.emplace("f", is.issue("f", "a", true, far, f.t0, [&](const Digest& h) { return h > id("d", f.t0); }));
  c.emplace("k", is.issue("k", "d", false, far, f.t1));
  c.emplace("m", is.issue("m", "d", false, far, f.t1, [&](const Digest& h) { return h > id("k", f.t1); }));
  c.emplace("g", is.issue("g", "d", false, far, f.t0, [&](const Digest& h) { return h > id("m", f.t1); }));
  c.emplace("j", is.issue("j", "d", false, far, f.t1, [&](const Digest& h) { return h > id("g", f.t0); }));
  c.emplace("h", is.issue("h", "b", false, far, f.t1));
  c.emplace("i", is.issue("i", "c", false, far, f.t1));
  c.emplace("l", is.issue("l", "e", false, far, f.t1));
  for (const char* n : {"a", "b", "c", "d", "e", "f", "g"}) f.reg[n] = f.t0;
  for (const char* n : {"h", "i", "j", "k", "l", "m"}) f.reg[n] = f.t1;

  LogConfig cfg;
  cfg.scheduling_period = kPeriod;
  cfg.start_time = kStart;
  cfg.trust_roots = {c.at("a").cert_hash(), c.at("b").cert_hash(), c.at("c").cert_hash()};
  cfg.vendor_pub = KeyPair::derive(KeyRole::VendorKey, "trees/vendor").public_key();
  f.log = std::make_unique<Log>(cfg, KeyPair::derive(KeyRole::LogKey, "trees/log"));
  Log& log = *f.log;

  const Certificate &a = c.at("a"), &b = c.at("b"), &cc = c.at("c"), &d = c.at("d"), &e = c.at("e");
  UnixTime now = kStart + 10;
  log.submit_chain(chain_of({&a}), now);
  log.submit_chain(chain_of({&b}), now);
  log.submit_chain(chain_of({&cc}), now);
  log.submit_chain(chain_of({&a, &d}), now);
  log.submit_chain(chain_of({&a, &e}), now);
  log.submit_chain(chain_of({&a, &c.at("f")}), now);
  log.submit_chain(chain_of({&a, &d, &c.at("g")}), now);
  log.run_update(f.t0);

  now = f.t0 + 10;
  log.submit_chain(chain_of({&b, &c.at("h")}), now);
  log.submit_chain(chain_of({&cc, &c.at("i")}), now);
  log.submit_chain(chain_of({&a, &d, &c.at("j")}), now);
  f.rev_d = make_revocation(RevocationKind::CaRevokeFrom, d, far - 86400, is.rk("d"),
                            SignerRole::RevocationKey);
  log.submit_revocation(chain_of({&a, &d}), f.rev_d, now);
  log.submit_chain(chain_of({&a, &d, &c.at("k")}), now);
  log.submit_chain(chain_of({&a, &e, &c.at("l")}), now);
  f.chain_adm = chain_of({&a, &d, &c.at("m")});
  f.cc_adm = log.submit_chain(f.chain_adm, now);
  log.run_update(f.t1);

  f.bundle = log.get_proof(proof_query(f.chain_adm, f.cc_adm));
  return f;
}

PruningFixture build_pruning_fixture() {
  PruningFixture f;
  f.t0 = kStart + kPeriod;
  f.t1 = kStart + 2 * kPeriod;
  f.t2 = kStart + 3 * kPeriod;
  f.grace = kPeriod;
  const UnixTime short_lived = f.t2 + 100;
  f.prune_time = short_lived + f.grace;
  const UnixTime far = kStart + 5 * 365 * 86400;
  Issuer is;
  auto& c = f.certs;
  c.emplace("a", is.issue("a", "", true, short_lived, f.t0));
  for (const char* n : {"b", "c", "d", "e", "f"}) c.emplace(n, is.issue(n, "a", false, short_lived, f.t0));
  c.emplace("h", is.issue("h", "", true, far, f.t2));
  c.emplace("i", is.issue("i", "h", false, far, f.t2));
  c.emplace("j", is.issue("j", "h", false, far, f.t2));
  c.emplace("k", is.issue("k", "", true, far, f.t2));
  c.emplace("l", is.issue("l", "k", false, far, f.t2));
  c.emplace("m", is.issue("m", "k", false, far, f.t2));

  LogConfig cfg;
  cfg.scheduling_period = kPeriod;
  cfg.start_time = kStart;
  cfg.trust_roots = {c.at("a").cert_hash(), c.at("h").cert_hash(), c.at("k").cert_hash()};
  cfg.vendor_pub = KeyPair::derive(KeyRole::VendorKey, "trees/vendor").public_key();
  f.log = std::make_unique<Log>(cfg, KeyPair::derive(KeyRole::LogKey, "trees/log"));
  Log& log = *f.log;

  const Certificate &a = c.at("a"), &h = c.at("h"), &k = c.at("k");
  UnixTime now = kStart + 10;
  log.submit_chain(chain_of({&a}), now);
  for (const char* n : {"b", "c", "d", "e", "f"}) log.submit_chain(chain_of({&a, &c.at(n)}), now);
  log.run_update(f.t0);
  log.run_update(f.t1);

  now = f.t1 + 10;
  log.submit_chain(chain_of({&h, &c.at("i")}), now);
  log.submit_chain(chain_of({&h, &c.at("j")}), now);
  f.rev_f = make_revocation(RevocationKind::LeafRevoke, c.at("f"), std::nullopt, is.key("f"),
                            SignerRole::OwnKey);
  log.submit_revocation(chain_of({&a, &c.at("f")}), f.rev_f, now);
  log.submit_chain(chain_of({&k, &c.at("l")}), now);
  log.submit_chain(chain_of({&k, &c.at("m")}), now);
  log.run_update(f.t2);
  return f;
}

}  // namespace pkisn::testing
