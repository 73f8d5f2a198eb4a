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

#include "pkisn/bench.hpp"

#include <chrono>

namespace pkisn {

json BenchReport::to_json() const {
  return json{{"chains", chains},
              {"registration_chains_per_s", registration_per_second},
              {"update_s", update_seconds},
              {"validation_ms_mean", validation_ms_mean},
              {"pre_validate_ms_mean", pre_validate_ms_mean},
              {"proof_check_ms_mean", proof_check_ms_mean}};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

}  // namespace

BenchReport run_bench(const BenchParams& params) {
  constexpr UnixTime kStart = 1'700'000'000;
  const KeyPair root_key = KeyPair::derive(KeyRole::StandardCA, "bench/root");
  const KeyPair ica_key = KeyPair::derive(KeyRole::StandardCA, "bench/ica");
  const KeyPair rk = KeyPair::derive(KeyRole::RevocationKey, "bench/rk");
  const KeyPair vendor = KeyPair::derive(KeyRole::VendorKey, "bench/vendor");
  const KeyPair log_key = KeyPair::derive(KeyRole::LogKey, "bench/log");

  const Certificate root = issue_certificate(
      {1, "Bench Root", root_key.public_key(), true, kStart - 10, kStart + 3650 * 86400, rk.public_key()}, root_key);
  const Certificate ica = issue_certificate(
      {2, "Bench CA", ica_key.public_key(), true, kStart - 10, kStart + 1825 * 86400, rk.public_key()}, root_key);

  std::vector<CertChain> chains;
  chains.reserve(params.chains);
  for (std::size_t i = 0; i < params.chains; ++i) {
    const KeyPair leaf_key = KeyPair::derive(KeyRole::StandardLeaf, "bench/leaf" + std::to_string(i));
    Certificate leaf = issue_certificate({100 + i, "site" + std::to_string(i) + ".example", leaf_key.public_key(),
                                          false, kStart - 10, kStart + 365 * 86400, std::nullopt},
                                         ica_key);
    chains.push_back(CertChain{{root, ica, std::move(leaf)}});
  }

  LogConfig cfg;
  cfg.start_time = kStart;
  cfg.trust_roots = {root.cert_hash()};
  cfg.vendor_pub = vendor.public_key();
  Log log(cfg, log_key);

  BenchReport r;
  r.chains = params.chains;
  std::vector<ChainCommitment> ccs;
  ccs.reserve(chains.size());
  auto t = Clock::now();
  for (const CertChain& c : chains) ccs.push_back(log.submit_chain(c, kStart + 1));
  r.registration_per_second = static_cast<double>(chains.size()) / seconds_since(t);

  t = Clock::now();
  const SignedRoot sr = log.run_update(log.next_update_time());
  r.update_seconds = seconds_since(t);

  const std::size_t n = std::min(params.validations, chains.size());
  if (n == 0) return r;
  const UnixTime now = sr.timestamp + 60;
  double total = 0, pre = 0, proofs = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = k * chains.size() / n;
    const ProofBundle bundle = log.get_proof(proof_query(chains[i], ccs[i]));
    ValidationInput in{chains[i], ccs[i], bundle.proof, bundle.signed_root, bundle.pending,
                       chains[i].leaf().subject_name, now, cfg.trust_roots, log.public_key(),
                       vendor.public_key(), 2 * cfg.scheduling_period};
    auto t0 = Clock::now();
    const Verdict v = is_valid(in);
    total += seconds_since(t0);
    if (!v.ok()) throw Error(ErrorCode::InvalidChain, "bench chain failed validation");

    t0 = Clock::now();
    pre_validate(in.chain, in.name, in.trust_roots, now);
    pre += seconds_since(t0);
    t0 = Clock::now();
    check_proofs(in.signed_root, in.proof, in.chain, in.cc, in.log_pub, in.max_root_age, now);
    proofs += seconds_since(t0);
  }
  r.validation_ms_mean = total * 1000 / static_cast<double>(n);
  r.pre_validate_ms_mean = pre * 1000 / static_cast<double>(n);
  r.proof_check_ms_mean = proofs * 1000 / static_cast<double>(n);
  return r;
}

}  // namespace pkisn
