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

#include "pkisn/service.hpp"

#include <httplib.h>

#include <iostream>

namespace pkisn {

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Truncated:
    case ErrorCode::Malformed:
      return 400;
    case ErrorCode::UnknownLeaf:
    case ErrorCode::TargetNotLogged:
    case ErrorCode::NoSignedRoot:
      return 404;
    case ErrorCode::QueueFull:
      return 503;
    case ErrorCode::Io:
    case ErrorCode::CorruptJournal:
    case ErrorCode::Config:
      return 500;
    default:
      return 422;
  }
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::uint64_t query_u64(const httplib::Request& req, const char* name,
                        std::optional<std::uint64_t> fallback = std::nullopt) {
  if (!req.has_param(name)) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::Malformed, std::string("missing query parameter ") + name);
  }
  const std::string v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    std::uint64_t n = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Malformed, std::string("bad query parameter ") + name + "=" + v);
  }
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      reply(res, 200, fn(req));
    } catch (const UnknownLeafError& e) {
      reply(res, 404, json{{"error", to_string(e.code())},
                           {"message", e.what()},
                           {"level", e.level()},
                           {"absence", e.absence()}});
    } catch (const Error& e) {
      reply(res, http_status(e.code()), json{{"error", to_string(e.code())}, {"message", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, json{{"error", "Internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace

Service::Service(Log log, PublicKey vendor_pub, UnixTime prune_grace, ClockFn clock)
    : log_(std::move(log)), vendor_pub_(vendor_pub), prune_grace_(prune_grace),
      clock_(std::move(clock)) {}

Service::~Service() { stop_ticker(); }

json Service::handle_submit_chain(const json& body) {
  auto chain = parse_as<CertChain>(body.at("chain"));
  std::unique_lock lock(mu_);
  return json{{"cc", log_.submit_chain(chain, clock_())}};
}

json Service::handle_submit_revocation(const json& body) {
  auto chain = parse_as<CertChain>(body.at("chain"));
  auto rev = parse_as<RevocationMessage>(body.at("revocation"));
  std::unique_lock lock(mu_);
  return json{{"commitment", log_.submit_revocation(chain, rev, clock_())}};
}

json Service::handle_proof(const json& body) {
  auto query = parse_as<std::vector<Digest>>(body.at("id_hashes"));
  std::shared_lock lock(mu_);
  return json(log_.get_proof(query));
}

json Service::handle_tcrl(const json& body) {
  auto tcrl = parse_as<Tcrl>(body.at("tcrl"));
  std::unique_lock lock(mu_);
  return json{{"commitment", commit_tcrl(log_, tcrl, vendor_pub_, clock_())}};
}

void Service::attach(httplib::Server& server) {
  auto body_of = [](const httplib::Request& req) {
    json j = parse_json(req.body);
    if (!j.is_object()) throw Error(ErrorCode::Malformed, "request body must be an object");
    return j;
  };
  auto wrap_body = [&](json (Service::*fn)(const json&)) {
    return guarded([this, fn, body_of](const httplib::Request& req) {
      json body = body_of(req);
      try {
        return (this->*fn)(body);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::Malformed, e.what());
      }
    });
  };
  server.Post("/v1/submit-chain", wrap_body(&Service::handle_submit_chain));
  server.Post("/v1/submit-revocation", wrap_body(&Service::handle_submit_revocation));
  server.Post("/v1/proof", wrap_body(&Service::handle_proof));
  server.Post("/v1/tcrl", wrap_body(&Service::handle_tcrl));

  server.Get("/v1/root", guarded([this](const httplib::Request&) {
    std::shared_lock lock(mu_);
    if (!log_.latest_root()) throw Error(ErrorCode::NoSignedRoot, "no update has run yet");
    return json{{"signed_root", *log_.latest_root()}};
  }));
  server.Get("/v1/consistency", guarded([this](const httplib::Request& req) {
    std::uint64_t old_size = query_u64(req, "old");
    std::uint64_t new_size = query_u64(req, "new");
    std::shared_lock lock(mu_);
    return json{{"proof", log_.get_consistency(old_size, new_size)}};
  }));
  server.Get("/v1/delta", guarded([this](const httplib::Request& req) {
    std::uint64_t from = query_u64(req, "from", 0);
    std::shared_lock lock(mu_);
    return json{{"delta", build_delta(log_, from, PruneParams{clock_(), prune_grace_})}};
  }));
  server.Get("/v1/compaction", guarded([this](const httplib::Request& req) {
    std::shared_lock lock(mu_);
    std::uint64_t size = query_u64(req, "size", log_.time_tree().size());
    return json{{"items", build_compaction(log_, size, PruneParams{clock_(), prune_grace_})}};
  }));
  server.Get("/v1/entries", guarded([this](const httplib::Request& req) {
    std::shared_lock lock(mu_);
    std::uint64_t from = query_u64(req, "from", 0);
    std::uint64_t to = query_u64(req, "to", log_.time_tree().size());
    return json{{"entries", log_.entries(from, to)}};
  }));
  server.Get("/v1/updates", guarded([this](const httplib::Request& req) {
    std::uint64_t since = query_u64(req, "since", 0);
    std::shared_lock lock(mu_);
    return json{{"updates", LocalLogSource(log_).updates_since(since)}};
  }));
}

std::size_t Service::tick() {
  std::unique_lock lock(mu_);
  return log_.run_due_updates(clock_());
}

void Service::start_ticker(std::chrono::milliseconds interval) {
  stop_ticker();
  ticker_stop_ = false;
  ticker_ = std::thread([this, interval] {
    std::unique_lock lk(ticker_mu_);
    while (!ticker_cv_.wait_for(lk, interval, [this] { return ticker_stop_; })) {
      lk.unlock();
      try {
        tick();
      } catch (const std::exception& e) {
        std::cerr << "update failed: " << e.what() << "\n";
      }
      lk.lock();
    }
  });
}

void Service::stop_ticker() {
  {
    std::lock_guard lk(ticker_mu_);
    ticker_stop_ = true;
  }
  ticker_cv_.notify_all();
  if (ticker_.joinable()) ticker_.join();
}

}  // namespace pkisn
