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

#include "fixtures.hpp"

#include <stdlib.h>

#include <algorithm>
#include <set>
#include <tuple>

namespace pkisn::testing {

namespace {

constexpr std::size_t kMaxCerts = 6;

}  // namespace

const KeyPair& TestPki::key(const std::string& name, KeyRole role) {
  auto it = keys_.find(name);
  if (it == keys_.end()) it = keys_.emplace(name, KeyPair::derive(role, prefix_ + "/" + name)).first;
  return it->second;
}

Certificate TestPki::root(const std::string& name, UnixTime not_after, std::uint64_t serial) {
  return ca(name, name, not_after, serial);
}

Certificate TestPki::ca(const std::string& name, const std::string& issuer, UnixTime not_after,
                        std::uint64_t serial) {
  IssueParams p{serial, name + ".ca.test", ca_key(name).public_key(), true, not_before_, not_after,
                rk(name).public_key()};
  return issue_certificate(p, ca_key(issuer));
}

Certificate TestPki::leaf(const std::string& name, const std::string& issuer, UnixTime not_after,
                          std::uint64_t serial) {
  IssueParams p{serial, name, leaf_key(name).public_key(), false, not_before_, not_after, std::nullopt};
  return issue_certificate(p, ca_key(issuer));
}

CertChain chain_of(std::initializer_list<Certificate> certs) { return CertChain{std::vector<Certificate>(certs)}; }

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "pkisn-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw Error(ErrorCode::Io, "mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

TimeTreeEntry cert_entry(const Certificate& c, UnixTime reg_ts) {
  return TimeTreeEntry{EntryKind::Cert, c.canonical_bytes(), reg_ts};
}

TimeTreeEntry revocation_entry(const RevocationMessage& r, UnixTime reg_ts) {
  return TimeTreeEntry{EntryKind::Revocation, r.canonical_bytes(), reg_ts};
}

ScenarioFactory::ScenarioFactory()
    : log_key_(KeyPair::derive(KeyRole::LogKey, "fixture/log")),
      vendor_key_(KeyPair::derive(KeyRole::VendorKey, "fixture/vendor")),
      leaf_key_(KeyPair::derive(KeyRole::StandardLeaf, "fixture/leaf")) {
  for (std::size_t i = 0; i < kMaxCerts; ++i) {
    ca_keys_.push_back(KeyPair::derive(KeyRole::StandardCA, "fixture/ca" + std::to_string(i)));
    rk_keys_.push_back(KeyPair::derive(KeyRole::RevocationKey, "fixture/rk" + std::to_string(i)));
  }
}

ChainScenario ScenarioFactory::random(std::mt19937_64& rng) const {
  auto pick = [&](std::uint64_t n) { return static_cast<std::int64_t>(rng() % n); };
  ChainScenario s;
  const std::size_t n = 2 + static_cast<std::size_t>(pick(kMaxCerts - 1));
  UnixTime reg = kBase + kStep * pick(6);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) reg += kStep * pick(5);
    oracle::ModelCert c;
    c.is_ca = i + 1 < n;
    c.reg = reg;
    c.not_before = kBase - kStep;
    c.not_after = reg + kStep * (4 + pick(24));
    s.certs.push_back(c);
  }
  s.now = kBase + kStep * pick(36) + (pick(4) == 0 ? 17 : 0);
  // Mostly inside every validity window, so the revocation rules decide.
  UnixTime earliest_expiry = s.certs.front().not_after;
  for (const auto& c : s.certs) earliest_expiry = std::min(earliest_expiry, c.not_after);
  if (pick(4) != 0 && earliest_expiry > reg) s.now = reg + pick(earliest_expiry - reg);
  s.root_ts = s.now - kStep * pick(3);

  std::set<std::tuple<std::size_t, int, int, UnixTime, bool>> seen;
  const std::int64_t count = pick(9);
  for (std::int64_t k = 0; k < count; ++k) {
    oracle::ModelRev r;
    r.target = static_cast<std::size_t>(pick(n));
    const bool ca = s.certs[r.target].is_ca;
    std::vector<SignerRole> roles = ca ? std::vector{SignerRole::Vendor, SignerRole::RevocationKey}
                                       : std::vector{SignerRole::Vendor, SignerRole::OwnKey};
    if (r.target > 0) roles.push_back(SignerRole::ParentCA);
    r.role = roles[static_cast<std::size_t>(pick(roles.size()))];
    r.depth = r.role == SignerRole::ParentCA ? static_cast<std::uint8_t>(1 + pick(r.target)) : 0;
    if (ca) r.rev_ts = kBase + kStep * pick((s.certs[r.target].not_after - kBase) / kStep);
    r.reg = kBase + kStep * pick(36);
    r.authentic = pick(10) != 0;
    r.pending = pick(7) == 0;
    auto key = std::make_tuple(r.target, static_cast<int>(r.role), static_cast<int>(r.depth),
                               r.rev_ts.value_or(-1), r.authentic);
    if (!seen.insert(key).second) continue;
    s.revs.push_back(r);
  }
  materialize(s);
  return s;
}

void ScenarioFactory::materialize(ChainScenario& s) const {
  const std::size_t n = s.certs.size();
  s.chain.certs.clear();
  s.messages.clear();
  s.pending.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = s.certs[i];
    IssueParams p;
    p.serial = i + 1;
    p.subject_name = m.is_ca ? "ca" + std::to_string(i) + ".test" : "leaf.test";
    p.subject_public_key = m.is_ca ? ca_keys_[i].public_key() : leaf_key_.public_key();
    p.is_ca = m.is_ca;
    p.not_before = m.not_before;
    p.not_after = m.not_after;
    if (m.is_ca) p.revocation_public_key = rk_keys_[i].public_key();
    s.chain.certs.push_back(issue_certificate(p, i == 0 ? ca_keys_[0] : ca_keys_[i - 1]));
  }

  for (const auto& r : s.revs) s.messages.push_back(sign(s, r));

  RevTree rt;
  std::vector<UnixTime> ts;
  for (std::size_t i = 0; i < n; ++i) {
    const Certificate& c = s.chain.certs[i];
    std::optional<Digest> parent;
    if (i > 0) parent = s.chain.certs[i - 1].cert_hash();
    rt.insert(c.cert_hash(), c.canonical_bytes(), s.certs[i].reg, parent);
    ts.push_back(s.certs[i].reg);
  }
  for (std::size_t k = 0; k < s.revs.size(); ++k) {
    const Bytes bytes = s.messages[k].canonical_bytes();
    if (s.revs[k].pending) {
      s.pending.push_back(PendingRevocation{
          bytes, RevocationCommitment::make(log_key_, hash_leaf(bytes), s.root_ts + kStep)});
    } else {
      rt.add_revocation(s.chain.certs[s.revs[k].target].cert_hash(),
                        LoggedRevocation{bytes, s.revs[k].reg});
    }
  }
  rt.commit();

  RevRootAnchor anchor{rt.root(), s.root_ts, {}};
  TimeTree tree;
  tree.append({anchor.entry()});
  anchor.inclusion = tree.inclusion_proof(0);
  s.signed_root = SignedRoot::make(log_key_, tree.root(), s.root_ts);

  std::vector<Digest> query;
  for (std::size_t i = 0; i < n; ++i) {
    query.push_back(rev_id_hash(s.chain.certs[i].canonical_bytes(), ts[i]));
  }
  s.proof.levels = rt.prove_chain(query);
  s.proof.anchor = anchor;
  s.cc = ChainCommitment::make(log_key_, s.chain.leaf().cert_hash(), {ts.rbegin(), ts.rend()});
}

RevocationMessage ScenarioFactory::sign(const ChainScenario& s, const oracle::ModelRev& r) const {
  const Certificate& target = s.chain.certs[r.target];
  const KeyRole forged_role = r.role == SignerRole::Vendor          ? KeyRole::VendorKey
                              : r.role == SignerRole::RevocationKey ? KeyRole::RevocationKey
                              : r.role == SignerRole::OwnKey        ? KeyRole::StandardLeaf
                                                                    : KeyRole::StandardCA;
  const KeyPair forger = KeyPair::derive(forged_role, "fixture/forger");
  const KeyPair* signer = &forger;
  if (r.authentic) {
    switch (r.role) {
      case SignerRole::Vendor: signer = &vendor_key_; break;
      case SignerRole::RevocationKey: signer = &rk_keys_[r.target]; break;
      case SignerRole::ParentCA: signer = &ca_keys_[r.target - r.depth]; break;
      case SignerRole::OwnKey: signer = &leaf_key_; break;
    }
  }
  const RevocationKind kind = target.is_ca ? RevocationKind::CaRevokeFrom : RevocationKind::LeafRevoke;
  return make_revocation(kind, target, r.rev_ts, *signer, r.role, r.depth);
}

std::vector<std::vector<RevocationEvidence>> ScenarioFactory::evidence(const ChainScenario& s,
                                                                       bool with_pending) const {
  std::vector<std::vector<RevocationEvidence>> out(s.chain.size());
  for (std::size_t k = 0; k < s.revs.size(); ++k) {
    const auto& r = s.revs[k];
    if (r.pending && !with_pending) continue;
    out[r.target].push_back(RevocationEvidence{s.messages[k], r.pending ? s.root_ts : r.reg, r.pending});
  }
  return out;
}

ValidationInput ScenarioFactory::input(const ChainScenario& s, bool with_pending) const {
  ValidationInput in;
  in.chain = s.chain;
  in.cc = s.cc;
  in.proof = s.proof;
  in.signed_root = s.signed_root;
  if (with_pending) in.pending_revocations = s.pending;
  in.name = "leaf.test";
  in.now = s.now;
  in.trust_roots = trust_roots(s);
  in.log_pub = log_key_.public_key();
  in.vendor_pub = vendor_key_.public_key();
  in.max_root_age = kMaxRootAge;
  return in;
}

oracle::RuleInterpreter ScenarioFactory::interpreter(const ChainScenario& s, bool with_pending) const {
  std::vector<oracle::ModelRev> revs;
  for (const auto& r : s.revs) {
    if (with_pending || !r.pending) revs.push_back(r);
  }
  return oracle::RuleInterpreter(s.certs, std::move(revs), s.root_ts);
}

Tcrl ScenarioFactory::tcrl(const ChainScenario& s) const {
  std::vector<TcrlSource> sources;
  for (std::size_t i = 0; i < s.chain.size(); ++i) {
    TcrlSource src{s.chain.certs[i].cert_hash(), s.certs[i].not_after, {}};
    for (std::size_t k = 0; k < s.revs.size(); ++k) {
      if (s.revs[k].target == i && !s.revs[k].pending) {
        src.revocations.push_back({s.messages[k].canonical_bytes(), s.revs[k].reg});
      }
    }
    if (!src.revocations.empty()) sources.push_back(std::move(src));
  }
  return build_tcrl(sources, vendor_key_, s.now, 1);
}

}  // namespace pkisn::testing
