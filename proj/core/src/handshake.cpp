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

#include "pkisn/handshake.hpp"

namespace pkisn {

void TlsServer::refresh(const Log& log) { bundle_ = log.get_proof(proof_query(chain_, cc_)); }

std::optional<HandshakeMessage> TlsServer::status_message() const {
  if (!bundle_) return std::nullopt;
  return HandshakeMessage{chain_, cc_, bundle_->proof, bundle_->signed_root, bundle_->pending};
}

Verdict handshake_sim(const TlsServer& server, const ClientConfig& client, std::string_view name,
                      UnixTime now) {
  auto msg = server.status_message();
  if (!msg) return Verdict::fail(Reason::StaleRoot);
  ValidationInput in;
  in.chain = std::move(msg->chain);
  in.cc = std::move(msg->cc);
  in.proof = std::move(msg->proof);
  in.signed_root = msg->signed_root;
  in.pending_revocations = std::move(msg->pending);
  in.name = std::string(name);
  in.now = now;
  in.trust_roots = client.trust_roots;
  in.log_pub = client.log_pub;
  in.vendor_pub = client.vendor_pub;
  in.max_root_age = client.max_root_age;
  return is_valid(in);
}

}  // namespace pkisn
