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

// Reference implementations used as test oracles. They follow the textbook
// recursive definitions and share nothing with the incremental code beyond
// SHA-256 itself.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pkisn/cert.hpp"
#include "pkisn/crypto.hpp"
#include "pkisn/rev_tree.hpp"
#include "pkisn/validator.hpp"

namespace pkisn::oracle {

Digest leaf(ByteView data);
Digest node(const Digest& l, const Digest& r);

/// MTH over already leaf-hashed inputs.
Digest mth(std::span<const Digest> leaves);
/// PATH(m, D[n]).
std::vector<Digest> path(std::size_t m, std::span<const Digest> leaves);
/// PROOF(m, D[n]).
std::vector<Digest> consistency(std::size_t m, std::span<const Digest> leaves);

struct ForestCert {
  Digest cert_hash;
  Bytes bytes;
  UnixTime reg_ts = 0;
  std::optional<Digest> parent;
  std::vector<LoggedRevocation> revocations;
};

Digest rev_id(ByteView cert_bytes, UnixTime reg_ts);
/// Root of the hierarchical forest, rebuilt from scratch.
Digest forest_root(const std::vector<ForestCert>& certs);

// Validator model. Every field is a plain value; the interpreter evaluates
// "is certificate i legitimate at time t" directly from the rules.

struct ModelCert {
  bool is_ca = false;
  UnixTime reg = 0;
  UnixTime not_before = 0;
  UnixTime not_after = 0;
};

struct ModelRev {
  std::size_t target = 0;
  SignerRole role = SignerRole::OwnKey;
  std::uint8_t depth = 0;
  std::optional<UnixTime> rev_ts;  // CA targets only
  UnixTime reg = 0;
  bool authentic = true;  // signed with the key its role names
  bool pending = false;
};

struct ModelVerdict {
  Decision decision = Decision::Fail;
  Reason reason = Reason::None;
};

class RuleInterpreter {
 public:
  RuleInterpreter(std::vector<ModelCert> certs, std::vector<ModelRev> revs, UnixTime root_ts)
      : certs_(std::move(certs)), revs_(std::move(revs)), root_ts_(root_ts) {}

  bool legit(std::size_t i, UnixTime t) const;
  ModelVerdict decide(UnixTime now) const;

 private:
  UnixTime effective_reg(const ModelRev& r) const { return r.pending ? root_ts_ : r.reg; }
  bool well_formed(const ModelRev& r) const;
  bool applicable(const ModelRev& r) const;
  /// Applicable revocations of the highest-priority class present.
  std::vector<const ModelRev*> winners(std::size_t i) const;
  UnixTime cutoff(const ModelRev& r) const;

  std::vector<ModelCert> certs_;
  std::vector<ModelRev> revs_;
  UnixTime root_ts_;
};

}  // namespace pkisn::oracle
