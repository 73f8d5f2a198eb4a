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

#include "pkisn/log.hpp"

#include <unordered_set>

#include "pkisn/journal.hpp"

namespace pkisn {
namespace {

void write_chain(ByteWriter& w, const CertChain& chain) {
  w.u8(static_cast<std::uint8_t>(chain.size()));
  for (const Certificate& c : chain.certs) w.var(c.canonical_bytes());
}

CertChain read_chain(ByteReader& r) {
  CertChain chain;
  const std::uint8_t n = r.u8();
  for (std::uint8_t i = 0; i < n; ++i) chain.certs.push_back(Certificate::decode(r.var()));
  return chain;
}

Digest read_digest(ByteReader& r) {
  Digest d;
  ByteView v = r.raw(32);
  std::copy(v.begin(), v.end(), d.bytes.begin());
  return d;
}

}  // namespace

UnknownLeafError::UnknownLeafError(std::size_t level, AbsenceProof absence)
    : Error(ErrorCode::UnknownLeaf, "no registered certificate at level " + std::to_string(level)),
      level_(level),
      absence_(std::move(absence)) {}

Log::Log(LogConfig config, KeyPair log_key) : config_(std::move(config)), log_key_(std::move(log_key)) {
  if (config_.scheduling_period <= 0) throw Error(ErrorCode::Config, "scheduling_period must be > 0");
  next_update_ = config_.start_time + config_.scheduling_period;
}

Log::~Log() = default;
Log::Log(Log&&) noexcept = default;
Log& Log::operator=(Log&&) noexcept = default;

bool Log::lineage_matches(const CertChain& chain) const {
  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto it = certs_.find(chain.certs[i].cert_hash());
    if (it == certs_.end()) return false;
    const std::optional<Digest> expected =
        i == 0 ? std::nullopt : std::optional<Digest>(chain.certs[i - 1].cert_hash());
    if (it->second.parent != expected) return false;
  }
  return true;
}

ChainCommitment Log::do_submit_chain(const CertChain& chain, UnixTime now) {
  if (chain.empty() || chain.size() > 255) throw Error(ErrorCode::InvalidChain, "chain length");
  if (!chain_links_valid(chain, /*require_leaf_end=*/false)) {
    throw Error(ErrorCode::InvalidChain, "chain signatures or structure do not verify");
  }
  if (!config_.trust_roots.contains(chain.root().cert_hash())) {
    throw Error(ErrorCode::UntrustedRoot, chain.root().subject_name);
  }
  std::vector<Digest> hashes;
  std::size_t fresh = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Certificate& c = chain.certs[i];
    if (now < c.not_before || now > c.not_after) {
      throw Error(ErrorCode::InvalidChain, "certificate '" + c.subject_name + "' outside validity");
    }
    hashes.push_back(c.cert_hash());
    if (i > 0) {
      if (c.self_signed()) throw Error(ErrorCode::InvalidChain, "self-signed certificate below the root");
      auto owner = key_owner_.find(chain.certs[i - 1].subject_public_key.key_id());
      if (owner != key_owner_.end() && owner->second != hashes[i - 1]) {
        throw Error(ErrorCode::InvalidChain, "issuer key of '" + c.subject_name +
                                                 "' is registered under another certificate");
      }
    }
    auto it = certs_.find(hashes.back());
    if (it == certs_.end()) {
      ++fresh;
      continue;
    }
    const std::optional<Digest> expected = i == 0 ? std::nullopt : std::optional<Digest>(hashes[i - 1]);
    if (it->second.parent != expected) {
      throw Error(ErrorCode::InvalidChain, "'" + c.subject_name + "' is registered under another issuer");
    }
  }
  if (pending_.size() + fresh > config_.max_pending) {
    throw Error(ErrorCode::QueueFull, std::to_string(pending_.size()) + " items pending");
  }

  std::vector<UnixTime> leaf_to_root(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto [it, inserted] = certs_.try_emplace(hashes[i]);
    if (inserted) {
      CertRecord& rec = it->second;
      rec.cert = chain.certs[i];
      rec.bytes = chain.certs[i].canonical_bytes();
      rec.reg_ts = next_update_;
      if (i > 0) rec.parent = hashes[i - 1];
      if (rec.cert.is_ca) key_owner_.try_emplace(rec.cert.subject_public_key.key_id(), hashes[i]);
      pending_.emplace_back(QueuedCert{hashes[i]});
    }
    leaf_to_root[chain.size() - 1 - i] = it->second.reg_ts;
  }
  return ChainCommitment::make(log_key_, hashes.back(), std::move(leaf_to_root));
}

RevocationCommitment Log::do_submit_revocation(const CertChain& chain, const RevocationMessage& rev,
                                               UnixTime /*now*/) {
  if (chain.empty()) throw Error(ErrorCode::InvalidChain, "empty chain");
  if (!chain_links_valid(chain, /*require_leaf_end=*/false)) {
    throw Error(ErrorCode::InvalidChain, "chain signatures or structure do not verify");
  }
  if (!config_.trust_roots.contains(chain.root().cert_hash())) {
    throw Error(ErrorCode::UntrustedRoot, chain.root().subject_name);
  }
  const Certificate& target = chain.leaf();
  const Digest target_hash = target.cert_hash();
  if (rev.target_cert_hash != target_hash) {
    throw Error(ErrorCode::IllegitimateRevocation, "revocation does not name the chain's last certificate");
  }
  auto target_it = certs_.find(target_hash);
  if (target_it == certs_.end()) throw Error(ErrorCode::TargetNotLogged, target.subject_name);
  if (!lineage_matches(chain)) {
    throw Error(ErrorCode::InvalidChain, "chain does not match the registered issuer lineage");
  }
  if (rev.rev_timestamp && *rev.rev_timestamp >= target.not_after) {
    throw Error(ErrorCode::TimestampAfterExpiry, "rev_timestamp must precede not_after");
  }
  if (!verify_revocation(rev, target, chain, config_.vendor_pub)) {
    throw Error(ErrorCode::IllegitimateRevocation, "signature or signer role rejected");
  }

  Bytes bytes = rev.canonical_bytes();
  const Digest rev_hash = hash_leaf(bytes);
  if (auto it = revocations_.find(rev_hash); it != revocations_.end()) return it->second;

  CertRecord& rec = target_it->second;
  if (rev.signer_role == SignerRole::RevocationKey && rec.rk_revocation) {
    throw Error(ErrorCode::DuplicateRkRevocation, "revocation key of '" + target.subject_name + "' already used");
  }
  if (pending_.size() + 1 > config_.max_pending) {
    throw Error(ErrorCode::QueueFull, std::to_string(pending_.size()) + " items pending");
  }
  if (rev.signer_role == SignerRole::RevocationKey) rec.rk_revocation = rev_hash;
  RevocationCommitment c = RevocationCommitment::make(log_key_, rev_hash, next_update_);
  revocations_.emplace(rev_hash, c);
  pending_.emplace_back(QueuedRevocation{target_hash, std::move(bytes), c});
  return c;
}

TcrlCommitment Log::do_submit_tcrl(const Digest& tcrl_hash) {
  if (auto it = tcrls_.find(tcrl_hash); it != tcrls_.end()) return it->second;
  if (pending_.size() + 1 > config_.max_pending) {
    throw Error(ErrorCode::QueueFull, std::to_string(pending_.size()) + " items pending");
  }
  TcrlCommitment c = TcrlCommitment::make(log_key_, tcrl_hash, next_update_);
  tcrls_.emplace(tcrl_hash, c);
  pending_.emplace_back(QueuedTcrl{tcrl_hash});
  return c;
}

SignedRoot Log::do_update() {
  const UnixTime t = next_update_;
  std::vector<TimeTreeEntry> batch;
  batch.reserve(pending_.size() + 1);
  for (const Queued& q : pending_) {
    if (const auto* qc = std::get_if<QueuedCert>(&q)) {
      CertRecord& rec = certs_.at(qc->cert_hash);
      batch.push_back(TimeTreeEntry{EntryKind::Cert, rec.bytes, t});
      rev_tree_.insert(qc->cert_hash, rec.bytes, t, rec.parent);
      rec.appended = true;
    } else if (const auto* qr = std::get_if<QueuedRevocation>(&q)) {
      batch.push_back(TimeTreeEntry{EntryKind::Revocation, qr->rev_bytes, t});
      rev_tree_.add_revocation(qr->target, LoggedRevocation{qr->rev_bytes, t});
    } else {
      const auto& qt = std::get<QueuedTcrl>(q);
      batch.push_back(TimeTreeEntry{EntryKind::Tcrl, Bytes(qt.tcrl_hash.bytes.begin(), qt.tcrl_hash.bytes.end()), t});
    }
  }
  const Digest rev_root = rev_tree_.commit();
  batch.push_back(TimeTreeEntry{EntryKind::RevTreeRoot, Bytes(rev_root.bytes.begin(), rev_root.bytes.end()), t});

  const std::uint64_t batch_start = time_tree_.size();
  time_tree_.append(batch);
  SignedRoot sr = SignedRoot::make(log_key_, time_tree_.root(), t);
  updates_.push_back(UpdateRecord{sr, time_tree_.size(), batch_start});
  latest_root_ = sr;
  pending_.clear();
  next_update_ = t + config_.scheduling_period;
  return sr;
}

ChainCommitment Log::submit_chain(const CertChain& chain, UnixTime now) {
  const std::size_t before = pending_.size();
  ChainCommitment cc = do_submit_chain(chain, now);
  if (journal_ && pending_.size() != before) {
    ByteWriter w;
    w.u64(static_cast<std::uint64_t>(now));
    write_chain(w, chain);
    journal_->append(JournalRecord::SubmitChain, w.bytes());
  }
  return cc;
}

RevocationCommitment Log::submit_revocation(const CertChain& chain, const RevocationMessage& rev,
                                            UnixTime now) {
  const std::size_t before = pending_.size();
  RevocationCommitment c = do_submit_revocation(chain, rev, now);
  if (journal_ && pending_.size() != before) {
    ByteWriter w;
    w.u64(static_cast<std::uint64_t>(now));
    write_chain(w, chain);
    w.var(rev.canonical_bytes());
    journal_->append(JournalRecord::SubmitRevocation, w.bytes());
  }
  return c;
}

TcrlCommitment Log::submit_tcrl_hash(const Digest& tcrl_hash, UnixTime now) {
  const std::size_t before = pending_.size();
  TcrlCommitment c = do_submit_tcrl(tcrl_hash);
  if (journal_ && pending_.size() != before) {
    ByteWriter w;
    w.u64(static_cast<std::uint64_t>(now)).raw(tcrl_hash.bytes);
    journal_->append(JournalRecord::SubmitTcrl, w.bytes());
  }
  return c;
}

SignedRoot Log::run_update(UnixTime now) {
  if (now < next_update_) {
    throw Error(ErrorCode::UpdateTooEarly,
                "next update at " + std::to_string(next_update_) + ", now " + std::to_string(now));
  }
  SignedRoot sr = do_update();
  if (journal_) {
    ByteWriter w;
    w.u64(static_cast<std::uint64_t>(sr.timestamp)).raw(sr.root.bytes);
    journal_->append(JournalRecord::Update, w.bytes());
  }
  return sr;
}

std::size_t Log::run_due_updates(UnixTime now) {
  std::size_t n = 0;
  while (now >= next_update_) {
    run_update(now);
    ++n;
  }
  return n;
}

ProofBundle Log::get_proof(const std::vector<Digest>& query) const {
  if (!latest_root_) throw Error(ErrorCode::NoSignedRoot, "the log has not run an update yet");
  if (query.empty()) throw Error(ErrorCode::InvalidChain, "empty proof request");

  RevRootAnchor anchor;
  anchor.rev_root = rev_tree_.root();
  anchor.timestamp = latest_root_->timestamp;
  anchor.inclusion = time_tree_.inclusion_proof(time_tree_.size() - 1);

  if (auto missing = rev_tree_.first_missing_level(query)) {
    std::vector<Digest> path(query.begin(), query.begin() + static_cast<std::ptrdiff_t>(*missing));
    AbsenceProof absence = rev_tree_.prove_absence(path, query[*missing]);
    absence.anchor = anchor;
    throw UnknownLeafError(*missing, std::move(absence));
  }

  ProofBundle bundle;
  bundle.proof.levels = rev_tree_.prove_chain(query);
  bundle.proof.anchor = std::move(anchor);
  bundle.signed_root = *latest_root_;

  std::unordered_set<Digest> ids(query.begin(), query.end());
  for (const Queued& q : pending_) {
    const auto* qr = std::get_if<QueuedRevocation>(&q);
    if (!qr) continue;
    auto id = rev_tree_.id_of(qr->target);
    if (id && ids.contains(*id)) bundle.pending.push_back(PendingRevocation{qr->rev_bytes, qr->commitment});
  }
  return bundle;
}

ConsistencyProof Log::get_consistency(std::uint64_t old_size, std::uint64_t new_size) const {
  return time_tree_.consistency_proof(old_size, new_size);
}

InclusionProof Log::get_inclusion(std::uint64_t index) const { return time_tree_.inclusion_proof(index); }

InclusionProof Log::get_inclusion(std::uint64_t index, std::uint64_t tree_size) const {
  return time_tree_.inclusion_proof(index, tree_size);
}

std::vector<TimeTreeEntry> Log::entries(std::uint64_t from, std::uint64_t to) const {
  if (from > to || to > time_tree_.size()) throw Error(ErrorCode::IndexOutOfRange, "entry range");
  const auto& all = time_tree_.entries();
  return {all.begin() + static_cast<std::ptrdiff_t>(from), all.begin() + static_cast<std::ptrdiff_t>(to)};
}

std::optional<UnixTime> Log::reg_timestamp(const Digest& cert_hash) const {
  auto it = certs_.find(cert_hash);
  if (it == certs_.end()) return std::nullopt;
  return it->second.reg_ts;
}

bool Log::is_appended(const Digest& cert_hash) const {
  auto it = certs_.find(cert_hash);
  return it != certs_.end() && it->second.appended;
}

const Certificate* Log::certificate(const Digest& cert_hash) const {
  auto it = certs_.find(cert_hash);
  return it == certs_.end() ? nullptr : &it->second.cert;
}

Log Log::open(const std::filesystem::path& data_dir, LogConfig config, KeyPair log_key) {
  std::filesystem::create_directories(data_dir);
  const auto path = data_dir / "journal.bin";
  auto records = Journal::load(path);
  Log log(std::move(config), std::move(log_key));

  auto corrupt = [](std::size_t i, const std::string& why) {
    return Error(ErrorCode::CorruptJournal, "record " + std::to_string(i) + ": " + why);
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    ByteReader r(rec.payload);
    try {
      switch (rec.type) {
        case JournalRecord::Genesis: {
          const auto start = static_cast<UnixTime>(r.u64());
          const auto period = static_cast<UnixTime>(r.u64());
          const Digest key_id = read_digest(r);
          if (i != 0) throw corrupt(i, "genesis record not first");
          if (start != log.config_.start_time || period != log.config_.scheduling_period ||
              key_id != log.log_key_.key_id()) {
            throw Error(ErrorCode::Config, "data directory was created with a different log configuration");
          }
          break;
        }
        case JournalRecord::SubmitChain: {
          const auto now = static_cast<UnixTime>(r.u64());
          log.do_submit_chain(read_chain(r), now);
          break;
        }
        case JournalRecord::SubmitRevocation: {
          const auto now = static_cast<UnixTime>(r.u64());
          CertChain chain = read_chain(r);
          RevocationMessage rev = RevocationMessage::decode(r.var());
          log.do_submit_revocation(chain, rev, now);
          break;
        }
        case JournalRecord::SubmitTcrl: {
          r.u64();
          log.do_submit_tcrl(read_digest(r));
          break;
        }
        case JournalRecord::Update: {
          const auto t = static_cast<UnixTime>(r.u64());
          const Digest root = read_digest(r);
          if (t != log.next_update_) throw corrupt(i, "update time out of schedule");
          if (log.do_update().root != root) throw corrupt(i, "replayed root differs from journal");
          break;
        }
      }
      r.expect_done();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CorruptJournal || e.code() == ErrorCode::Config) throw;
      throw corrupt(i, e.what());
    }
  }

  log.journal_ = std::make_unique<Journal>(path);
  if (records.empty()) {
    ByteWriter w;
    w.u64(static_cast<std::uint64_t>(log.config_.start_time))
        .u64(static_cast<std::uint64_t>(log.config_.scheduling_period))
        .raw(log.log_key_.key_id().bytes);
    log.journal_->append(JournalRecord::Genesis, w.bytes());
  }
  return log;
}

std::vector<UpdateRecord> LocalLogSource::updates_since(std::uint64_t tree_size) {
  std::vector<UpdateRecord> out;
  for (const UpdateRecord& u : log_.updates()) {
    if (u.tree_size > tree_size) out.push_back(u);
  }
  return out;
}

std::vector<TimeTreeEntry> LocalLogSource::entries(std::uint64_t from, std::uint64_t to) {
  return log_.entries(from, to);
}

std::vector<Digest> proof_query(const CertChain& chain, const ChainCommitment& cc) {
  if (chain.size() != cc.timestamps.size()) {
    throw Error(ErrorCode::InvalidChain, "commitment does not match chain length");
  }
  const auto ts = cc.root_to_leaf();
  std::vector<Digest> q;
  q.reserve(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) q.push_back(rev_id_hash(chain.certs[i].canonical_bytes(), ts[i]));
  return q;
}

}  // namespace pkisn
