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

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pkisn/log.hpp"
#include "pkisn/tcrl.hpp"
#include "pkisn/validator.hpp"

namespace pkisn::testing {

inline constexpr UnixTime kBase = 1'700'000'000;
inline constexpr UnixTime kStep = 50;

/// A small random chain with revocations, materialized as signed objects and
/// a presence proof over a RevTree built directly (no log admission rules).
struct ChainScenario {
  std::vector<oracle::ModelCert> certs;
  std::vector<oracle::ModelRev> revs;
  UnixTime now = 0;
  UnixTime root_ts = 0;

  CertChain chain;
  ChainCommitment cc;
  ChainPresenceProof proof;
  SignedRoot signed_root;
  std::vector<RevocationMessage> messages;  // parallel to revs
  std::vector<PendingRevocation> pending;
};

class ScenarioFactory {
 public:
  ScenarioFactory();

  ChainScenario random(std::mt19937_64& rng) const;
  /// Materializes the model fields of `s` (certs, revs, now, root_ts).
  void materialize(ChainScenario& s) const;

  ValidationInput input(const ChainScenario& s, bool with_pending = true) const;
  oracle::RuleInterpreter interpreter(const ChainScenario& s, bool with_pending = true) const;
  /// Signs the revocation `r` describes against the chain of `s`.
  RevocationMessage sign(const ChainScenario& s, const oracle::ModelRev& r) const;
  /// Per-certificate revocation evidence, root -> leaf.
  std::vector<std::vector<RevocationEvidence>> evidence(const ChainScenario& s, bool with_pending = true) const;
  /// TCRL over the logged (non-pending) revocations of the scenario.
  Tcrl tcrl(const ChainScenario& s) const;

  const KeyPair& log_key() const { return log_key_; }
  const KeyPair& vendor_key() const { return vendor_key_; }
  std::set<Digest> trust_roots(const ChainScenario& s) const { return {s.chain.root().cert_hash()}; }
  static constexpr UnixTime kMaxRootAge = 100 * kStep;

 private:
  KeyPair log_key_;
  KeyPair vendor_key_;
  std::vector<KeyPair> ca_keys_;
  std::vector<KeyPair> rk_keys_;
  KeyPair leaf_key_;
};

/// Named keys and certificates for hand-built hierarchies. Keys derive from
/// `prefix/name`, so two instances with the same prefix agree.
class TestPki {
 public:
  TestPki(std::string prefix, UnixTime not_before) : prefix_(std::move(prefix)), not_before_(not_before) {}

  const KeyPair& ca_key(const std::string& name) { return key(name, KeyRole::StandardCA); }
  const KeyPair& leaf_key(const std::string& name) { return key(name, KeyRole::StandardLeaf); }
  const KeyPair& rk(const std::string& name) { return key("rk/" + name, KeyRole::RevocationKey); }

  Certificate root(const std::string& name, UnixTime not_after, std::uint64_t serial = 1);
  Certificate ca(const std::string& name, const std::string& issuer, UnixTime not_after,
                 std::uint64_t serial = 1);
  Certificate leaf(const std::string& name, const std::string& issuer, UnixTime not_after,
                   std::uint64_t serial = 1);

 private:
  const KeyPair& key(const std::string& name, KeyRole role);

  std::string prefix_;
  UnixTime not_before_;
  std::map<std::string, KeyPair> keys_;
};

CertChain chain_of(std::initializer_list<Certificate> certs);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Time-tree entry bytes of a certificate, as the log writes them.
TimeTreeEntry cert_entry(const Certificate& c, UnixTime reg_ts);
TimeTreeEntry revocation_entry(const RevocationMessage& r, UnixTime reg_ts);

}  // namespace pkisn::testing
