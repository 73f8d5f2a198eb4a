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

#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "pkisn/cert.hpp"
#include "pkisn/commitments.hpp"
#include "pkisn/log.hpp"
#include "pkisn/validator.hpp"

namespace pkisn {

/// Everything a server staples into one handshake.
struct HandshakeMessage {
  CertChain chain;
  ChainCommitment cc;
  ChainPresenceProof proof;
  SignedRoot signed_root;
  std::vector<PendingRevocation> pending;
};

struct ClientConfig {
  std::set<Digest> trust_roots;
  PublicKey log_pub;
  PublicKey vendor_pub;
  UnixTime max_root_age = 2 * kDefaultSchedulingPeriod;
};

/// Server role: holds a chain and its CC and refreshes the proof from the
/// log, normally once per scheduling period.
class TlsServer {
 public:
  TlsServer(CertChain chain, ChainCommitment cc) : chain_(std::move(chain)), cc_(std::move(cc)) {}

  /// Throws whatever Log::get_proof throws.
  void refresh(const Log& log);
  std::optional<HandshakeMessage> status_message() const;

  const CertChain& chain() const { return chain_; }
  const ChainCommitment& cc() const { return cc_; }

 private:
  CertChain chain_;
  ChainCommitment cc_;
  std::optional<ProofBundle> bundle_;
};

/// One simulated handshake: the client runs is_valid on the stapled data.
/// A server that never fetched a proof fails with StaleRoot.
Verdict handshake_sim(const TlsServer& server, const ClientConfig& client, std::string_view name,
                      UnixTime now);

}  // namespace pkisn
