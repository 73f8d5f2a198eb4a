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

#include <nlohmann/json.hpp>

#include "pkisn/cert.hpp"
#include "pkisn/commitments.hpp"
#include "pkisn/crypto.hpp"
#include "pkisn/log.hpp"
#include "pkisn/merkle.hpp"
#include "pkisn/monitor.hpp"
#include "pkisn/rev_tree.hpp"
#include "pkisn/tcrl.hpp"
#include "pkisn/validator.hpp"

// JSON forms of every wire artifact. Hashes are lowercase hex; other byte
// strings (keys, signatures, encoded objects) are base64.
namespace pkisn {

using json = nlohmann::json;

void to_json(json& j, const Digest& d);
void from_json(const json& j, Digest& d);
void to_json(json& j, const PublicKey& k);
void from_json(const json& j, PublicKey& k);
void to_json(json& j, const Signature& s);
void from_json(const json& j, Signature& s);

void to_json(json& j, const Certificate& c);
void from_json(const json& j, Certificate& c);
void to_json(json& j, const CertChain& c);
void from_json(const json& j, CertChain& c);
void to_json(json& j, const RevocationMessage& r);
void from_json(const json& j, RevocationMessage& r);

void to_json(json& j, const ChainCommitment& c);
void from_json(const json& j, ChainCommitment& c);
void to_json(json& j, const SignedRoot& r);
void from_json(const json& j, SignedRoot& r);

template <std::uint8_t Tag>
void to_json(json& j, const HashCommitment<Tag>& c) {
  j = json{{"hash", c.hash}, {"timestamp", c.timestamp}, {"signature", c.log_signature}};
}
template <std::uint8_t Tag>
void from_json(const json& j, HashCommitment<Tag>& c) {
  j.at("hash").get_to(c.hash);
  j.at("timestamp").get_to(c.timestamp);
  j.at("signature").get_to(c.log_signature);
}

void to_json(json& j, const InclusionProof& p);
void from_json(const json& j, InclusionProof& p);
void to_json(json& j, const ConsistencyProof& p);
void from_json(const json& j, ConsistencyProof& p);
void to_json(json& j, const TimeTreeEntry& e);
void from_json(const json& j, TimeTreeEntry& e);

void to_json(json& j, const LoggedRevocation& r);
void from_json(const json& j, LoggedRevocation& r);
void to_json(json& j, const LevelRecord& r);
void from_json(const json& j, LevelRecord& r);
void to_json(json& j, const RevRootAnchor& a);
void from_json(const json& j, RevRootAnchor& a);
void to_json(json& j, const ChainPresenceProof& p);
void from_json(const json& j, ChainPresenceProof& p);
void to_json(json& j, const AbsenceProof& p);
void from_json(const json& j, AbsenceProof& p);

void to_json(json& j, const PendingRevocation& p);
void from_json(const json& j, PendingRevocation& p);
void to_json(json& j, const ProofBundle& b);
void from_json(const json& j, ProofBundle& b);
void to_json(json& j, const UpdateRecord& u);
void from_json(const json& j, UpdateRecord& u);

void to_json(json& j, const DeltaItem& i);
void from_json(const json& j, DeltaItem& i);
void to_json(json& j, const DeltaBatch& b);
void from_json(const json& j, DeltaBatch& b);
void to_json(json& j, const DeltaUpdate& d);
void from_json(const json& j, DeltaUpdate& d);

void to_json(json& j, const TcrlEntry& e);
void from_json(const json& j, TcrlEntry& e);
void to_json(json& j, const TcrlInclusion& i);
void from_json(const json& j, TcrlInclusion& i);
void to_json(json& j, const Tcrl& t);
void from_json(const json& j, Tcrl& t);
void to_json(json& j, const TcrlDelta& d);
void from_json(const json& j, TcrlDelta& d);

void to_json(json& j, const LegitimacyPeriod& lp);
void to_json(json& j, const Verdict& v);
void from_json(const json& j, Verdict& v);

void to_json(json& j, const MisbehaviorReport& r);
void from_json(const json& j, MisbehaviorReport& r);

/// {role, seed, public_key, key_id}; the seed is the secret.
json key_to_json(const KeyPair& key);
KeyPair key_from_json(const json& j);

/// j.get<T>() with JSON errors reported as ErrorCode::Malformed.
template <typename T>
T parse_as(const json& j) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Malformed, e.what());
  }
}

json parse_json(std::string_view text);

}  // namespace pkisn
