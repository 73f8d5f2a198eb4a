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

#include "pkisn/commitments.hpp"

namespace pkisn {

Bytes ChainCommitment::signed_payload() const {
  ByteWriter w;
  w.raw(leaf_cert_hash.bytes).u8(static_cast<std::uint8_t>(timestamps.size()));
  for (UnixTime t : timestamps) w.u64(static_cast<std::uint64_t>(t));
  return std::move(w).take();
}

bool ChainCommitment::timestamps_ordered() const {
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] > timestamps[i - 1]) return false;
  }
  return !timestamps.empty();
}

bool ChainCommitment::verify(const PublicKey& log_pub) const {
  return timestamps.size() <= 255 && timestamps_ordered() &&
         pkisn::verify(log_pub, tag::kChainCommitment, signed_payload(), log_signature);
}

ChainCommitment ChainCommitment::make(const KeyPair& log_key, const Digest& leaf_cert_hash,
                                      std::vector<UnixTime> timestamps_leaf_to_root) {
  if (timestamps_leaf_to_root.empty() || timestamps_leaf_to_root.size() > 255) {
    throw Error(ErrorCode::InvalidChain, "chain length must be 1..255");
  }
  ChainCommitment cc{leaf_cert_hash, std::move(timestamps_leaf_to_root), {}};
  cc.log_signature = log_key.sign(tag::kChainCommitment, cc.signed_payload());
  return cc;
}

Bytes SignedRoot::signed_payload() const {
  ByteWriter w;
  w.raw(root.bytes).u64(static_cast<std::uint64_t>(timestamp));
  return std::move(w).take();
}

bool SignedRoot::verify(const PublicKey& log_pub) const {
  return pkisn::verify(log_pub, tag::kSignedRoot, signed_payload(), log_signature);
}

SignedRoot SignedRoot::make(const KeyPair& log_key, const Digest& root, UnixTime timestamp) {
  SignedRoot sr{root, timestamp, {}};
  sr.log_signature = log_key.sign(tag::kSignedRoot, sr.signed_payload());
  return sr;
}

}  // namespace pkisn
