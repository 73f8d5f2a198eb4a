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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>

#include "pkisn/log.hpp"
#include "pkisn/monitor.hpp"
#include "pkisn/tcrl.hpp"
#include "pkisn/wire.hpp"

namespace httplib {
class Server;
class Client;
}  // namespace httplib

namespace pkisn {

/// HTTP front end of a Log. Request handlers run concurrently; every
/// mutation takes the writer lock, reads share it.
class Service {
 public:
  using ClockFn = std::function<UnixTime()>;

  Service(Log log, PublicKey vendor_pub, UnixTime prune_grace, ClockFn clock);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Registers the /v1 endpoints on `server`.
  void attach(httplib::Server& server);

  /// Runs every update that is due; returns how many ran.
  std::size_t tick();
  /// Calls tick() every `interval` on a background thread.
  void start_ticker(std::chrono::milliseconds interval);
  void stop_ticker();

  /// Runs `fn` with shared access to the log.
  template <typename Fn>
  auto with_log(Fn&& fn) const {
    std::shared_lock lock(mu_);
    return fn(static_cast<const Log&>(log_));
  }

 private:
  json handle_submit_chain(const json& body);
  json handle_submit_revocation(const json& body);
  json handle_proof(const json& body);
  json handle_tcrl(const json& body);

  mutable std::shared_mutex mu_;
  Log log_;
  PublicKey vendor_pub_;
  UnixTime prune_grace_;
  ClockFn clock_;

  std::mutex ticker_mu_;
  std::condition_variable ticker_cv_;
  bool ticker_stop_ = false;
  std::thread ticker_;
};

/// Client side of the /v1 endpoints. Errors returned by the service are
/// rethrown as pkisn::Error with the service's code.
class LogClient : public LogSource {
 public:
  /// `base_url` like "http://127.0.0.1:8080".
  explicit LogClient(const std::string& base_url);
  ~LogClient() override;

  ChainCommitment submit_chain(const CertChain& chain);
  RevocationCommitment submit_revocation(const CertChain& chain, const RevocationMessage& rev);
  /// Throws UnknownLeafError (with the absence proof) for unregistered levels.
  ProofBundle get_proof(const std::vector<Digest>& id_hashes);
  SignedRoot root();
  ConsistencyProof consistency(std::uint64_t old_size, std::uint64_t new_size);
  DeltaUpdate delta(std::uint64_t from);
  std::vector<DeltaItem> compaction(std::uint64_t size);
  TcrlCommitment submit_tcrl(const Tcrl& tcrl);

  std::vector<UpdateRecord> updates_since(std::uint64_t tree_size) override;
  std::vector<TimeTreeEntry> entries(std::uint64_t from, std::uint64_t to) override;

 private:
  json get(const std::string& path);
  json post(const std::string& path, const json& body);

  std::unique_ptr<httplib::Client> http_;
};

}  // namespace pkisn
