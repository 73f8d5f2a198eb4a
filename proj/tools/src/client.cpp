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

#include <httplib.h>

#include "pkisn/service.hpp"

namespace pkisn {

LogClient::LogClient(const std::string& base_url)
    : http_(std::make_unique<httplib::Client>(base_url)) {
  if (!http_->is_valid()) throw Error(ErrorCode::Config, "bad service url: " + base_url);
  http_->set_connection_timeout(5);
  http_->set_read_timeout(60);
}

LogClient::~LogClient() = default;

namespace {

json decode_response(const httplib::Result& res, const std::string& path) {
  if (!res) {
    throw Error(ErrorCode::Io, path + ": " + httplib::to_string(res.error()));
  }
  json body = parse_json(res->body);
  if (res->status == 200) return body;
  std::string code = body.value("error", "");
  std::string message = body.value("message", res->body);
  if (code == "UnknownLeaf" && body.contains("absence")) {
    throw UnknownLeafError(body.at("level").get<std::size_t>(),
                           parse_as<AbsenceProof>(body.at("absence")));
  }
  // The message already carries the code prefix; strip it to avoid doubling.
  if (auto pos = message.find(": "); pos != std::string::npos && message.substr(0, pos) == code) {
    message = message.substr(pos + 2);
  }
  if (auto ec = error_code_from_string(code)) throw Error(*ec, message);
  throw Error(ErrorCode::Io, path + ": HTTP " + std::to_string(res->status) + " " + message);
}

}  // namespace

json LogClient::get(const std::string& path) { return decode_response(http_->Get(path), path); }

json LogClient::post(const std::string& path, const json& body) {
  return decode_response(http_->Post(path, body.dump(), "application/json"), path);
}

ChainCommitment LogClient::submit_chain(const CertChain& chain) {
  return parse_as<ChainCommitment>(post("/v1/submit-chain", json{{"chain", chain}}).at("cc"));
}

RevocationCommitment LogClient::submit_revocation(const CertChain& chain,
                                                  const RevocationMessage& rev) {
  json body{{"chain", chain}, {"revocation", rev}};
  return parse_as<RevocationCommitment>(post("/v1/submit-revocation", body).at("commitment"));
}

ProofBundle LogClient::get_proof(const std::vector<Digest>& id_hashes) {
  return parse_as<ProofBundle>(post("/v1/proof", json{{"id_hashes", id_hashes}}));
}

SignedRoot LogClient::root() { return parse_as<SignedRoot>(get("/v1/root").at("signed_root")); }

ConsistencyProof LogClient::consistency(std::uint64_t old_size, std::uint64_t new_size) {
  return parse_as<ConsistencyProof>(
      get("/v1/consistency?old=" + std::to_string(old_size) + "&new=" + std::to_string(new_size))
          .at("proof"));
}

DeltaUpdate LogClient::delta(std::uint64_t from) {
  return parse_as<DeltaUpdate>(get("/v1/delta?from=" + std::to_string(from)).at("delta"));
}

std::vector<DeltaItem> LogClient::compaction(std::uint64_t size) {
  return parse_as<std::vector<DeltaItem>>(get("/v1/compaction?size=" + std::to_string(size)).at("items"));
}

TcrlCommitment LogClient::submit_tcrl(const Tcrl& tcrl) {
  return parse_as<TcrlCommitment>(post("/v1/tcrl", json{{"tcrl", tcrl}}).at("commitment"));
}

std::vector<UpdateRecord> LogClient::updates_since(std::uint64_t tree_size) {
  return parse_as<std::vector<UpdateRecord>>(
      get("/v1/updates?since=" + std::to_string(tree_size)).at("updates"));
}

std::vector<TimeTreeEntry> LogClient::entries(std::uint64_t from, std::uint64_t to) {
  return parse_as<std::vector<TimeTreeEntry>>(
      get("/v1/entries?from=" + std::to_string(from) + "&to=" + std::to_string(to)).at("entries"));
}

}  // namespace pkisn
