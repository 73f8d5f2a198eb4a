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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <variant>
#include <vector>

#include "pkisn/cert.hpp"
#include "pkisn/commitments.hpp"
#include "pkisn/crypto.hpp"
#include "pkisn/merkle.hpp"
#include "pkisn/rev_tree.hpp"

namespace pkisn {

class Journal;

inline constexpr UnixTime kDefaultSchedulingPeriod = 3600;

struct LogConfig {
  UnixTime scheduling_period = kDefaultSchedulingPeriod;
  /// The first update fires at start_time + scheduling_period.
  UnixTime start_time = 0;
  std::size_t max_pending = 1'000'000;
  std::set<Digest> trust_roots;
  /// Needed to accept vendor-signed revocations.
  PublicKey vendor_pub;
};

/// A revocation accepted but not yet appended, as attached to proofs.
struct PendingRevocation {
  Bytes rev_bytes;
  RevocationCommitment commitment;

  friend bool operator==(const PendingRevocation&, const PendingRevocation&) = default;
};

struct ProofBundle {
  ChainPresenceProof proof;
  SignedRoot signed_root;
  std::vector<PendingRevocation> pending;
};

/// One completed update: its signed root and the TimeTree size it covers.
struct UpdateRecord {
  SignedRoot signed_root;
  std::uint64_t tree_size = 0;
  std::uint64_t batch_start = 0;
};

class UnknownLeafError : public Error {
 public:
  UnknownLeafError(std::size_t level, AbsenceProof absence);
  std::size_t level() const { return level_; }
  const AbsenceProof& absence() const { return absence_; }

 private:
  std::size_t level_;
  AbsenceProof absence_;
};

/// Read side of a log as seen by monitors.
class LogSource {
 public:
  virtual ~LogSource() = default;
  virtual std::vector<UpdateRecord> updates_since(std::uint64_t tree_size) = 0;
  virtual std::vector<TimeTreeEntry> entries(std::uint64_t from, std::uint64_t to) = 0;
};

/// The log state machine. Submissions are checked and queued; run_update is
/// the only operation that changes the trees. Not internally synchronized:
/// callers serialize writers and may share const access between readers.
class Log {
 public:
  Log(LogConfig config, KeyPair log_key);
  ~Log();
  Log(Log&&) noexcept;
  Log& operator=(Log&&) noexcept;

  /// Opens (or creates) a journal in `data_dir` and replays it.
  static Log open(const std::filesystem::path& data_dir, LogConfig config, KeyPair log_key);

  ChainCommitment submit_chain(const CertChain& chain, UnixTime now);
  RevocationCommitment submit_revocation(const CertChain& chain, const RevocationMessage& rev,
                                         UnixTime now);
  /// Queues a TCRL hash; callers verify the vendor signature first.
  TcrlCommitment submit_tcrl_hash(const Digest& tcrl_hash, UnixTime now);

  /// Runs the update scheduled at next_update_time(); requires
  /// now >= next_update_time().
  SignedRoot run_update(UnixTime now);
  /// Runs every update due at or before `now`; returns how many ran.
  std::size_t run_due_updates(UnixTime now);

  /// `query` holds H(C_x || t_x) root -> leaf. Throws UnknownLeafError.
  ProofBundle get_proof(const std::vector<Digest>& query) const;
  ConsistencyProof get_consistency(std::uint64_t old_size, std::uint64_t new_size) const;
  InclusionProof get_inclusion(std::uint64_t index) const;
  InclusionProof get_inclusion(std::uint64_t index, std::uint64_t tree_size) const;

  const std::optional<SignedRoot>& latest_root() const { return latest_root_; }
  const std::vector<UpdateRecord>& updates() const { return updates_; }
  UnixTime next_update_time() const { return next_update_; }
  const LogConfig& config() const { return config_; }
  const PublicKey& public_key() const { return log_key_.public_key(); }

  const TimeTree& time_tree() const { return time_tree_; }
  const RevTree& rev_tree() const { return rev_tree_; }
  std::size_t pending_count() const { return pending_.size(); }
  std::vector<TimeTreeEntry> entries(std::uint64_t from, std::uint64_t to) const;

  /// Registration timestamp (scheduled or actual) of a known certificate.
  std::optional<UnixTime> reg_timestamp(const Digest& cert_hash) const;
  bool is_appended(const Digest& cert_hash) const;
  /// Known certificate, appended or still queued; nullptr otherwise.
  const Certificate* certificate(const Digest& cert_hash) const;

 private:
  struct CertRecord {
    Certificate cert;
    Bytes bytes;
    UnixTime reg_ts = 0;
    std::optional<Digest> parent;
    bool appended = false;
    std::optional<Digest> rk_revocation;
  };
  struct QueuedCert {
    Digest cert_hash;
  };
  struct QueuedRevocation {
    Digest target;
    Bytes rev_bytes;
    RevocationCommitment commitment;
  };
  struct QueuedTcrl {
    Digest tcrl_hash;
  };
  using Queued = std::variant<QueuedCert, QueuedRevocation, QueuedTcrl>;

  ChainCommitment do_submit_chain(const CertChain& chain, UnixTime now);
  RevocationCommitment do_submit_revocation(const CertChain& chain, const RevocationMessage& rev,
                                            UnixTime now);
  TcrlCommitment do_submit_tcrl(const Digest& tcrl_hash);
  SignedRoot do_update();
  bool lineage_matches(const CertChain& chain) const;

  LogConfig config_;
  KeyPair log_key_;
  TimeTree time_tree_;
  RevTree rev_tree_;
  std::unordered_map<Digest, CertRecord> certs_;
  // CA subject key id -> first registered certificate carrying it. Children
  // are only accepted under that certificate, so replicas can recover the
  // parent of every entry from its issuer_key_id.
  std::unordered_map<Digest, Digest> key_owner_;
  std::unordered_map<Digest, RevocationCommitment> revocations_;
  std::unordered_map<Digest, TcrlCommitment> tcrls_;
  std::vector<Queued> pending_;
  std::vector<UpdateRecord> updates_;
  std::optional<SignedRoot> latest_root_;
  UnixTime next_update_ = 0;
  std::unique_ptr<Journal> journal_;
};

/// LogSource over an in-process Log.
class LocalLogSource : public LogSource {
 public:
  explicit LocalLogSource(const Log& log) : log_(log) {}
  std::vector<UpdateRecord> updates_since(std::uint64_t tree_size) override;
  std::vector<TimeTreeEntry> entries(std::uint64_t from, std::uint64_t to) override;

 private:
  const Log& log_;
};

/// Request of H(C_x || t_x) root -> leaf for a chain and its commitment.
std::vector<Digest> proof_query(const CertChain& chain, const ChainCommitment& cc);

}  // namespace pkisn
