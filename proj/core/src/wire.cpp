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

#include "pkisn/wire.hpp"

namespace pkisn {
namespace {

std::string b64(ByteView b) { return to_base64(b); }
Bytes unb64(const json& j) { return from_base64(j.get<std::string>()); }

template <std::size_t N>
std::array<std::uint8_t, N> fixed(const Bytes& b, const char* what) {
  if (b.size() != N) throw Error(ErrorCode::Malformed, std::string(what) + " has wrong length");
  std::array<std::uint8_t, N> out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

template <typename T>
void opt_to(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
void opt_from(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) {
    v = j.at(key).get<T>();
  } else {
    v.reset();
  }
}

EntryKind entry_kind_from(std::string_view s) {
  for (EntryKind k : {EntryKind::Cert, EntryKind::Revocation, EntryKind::RevTreeRoot, EntryKind::Tcrl}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::Malformed, "unknown entry kind '" + std::string(s) + "'");
}

std::string_view delta_kind_name(DeltaItem::Kind k) {
  switch (k) {
    case DeltaItem::Kind::Cover: return "cover";
    case DeltaItem::Kind::Hash: return "hash";
    case DeltaItem::Kind::Full: return "full";
  }
  return "?";
}

template <typename E>
E enum_from(std::string_view s, std::initializer_list<E> values) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  throw Error(ErrorCode::Malformed, "unknown value '" + std::string(s) + "'");
}

}  // namespace

void to_json(json& j, const Digest& d) { j = d.hex(); }
void from_json(const json& j, Digest& d) { d = Digest::from_hex(j.get<std::string>()); }

void to_json(json& j, const PublicKey& k) { j = b64(k.view()); }
void from_json(const json& j, PublicKey& k) { k.bytes = fixed<32>(unb64(j), "public key"); }

void to_json(json& j, const Signature& s) {
  j = json{{"key_id", s.signer_key_id}, {"tag", s.payload_tag}, {"sig", b64(s.bytes)}};
}
void from_json(const json& j, Signature& s) {
  j.at("key_id").get_to(s.signer_key_id);
  j.at("tag").get_to(s.payload_tag);
  s.bytes = fixed<64>(unb64(j.at("sig")), "signature");
}

void to_json(json& j, const Certificate& c) {
  j = json{{"bytes", b64(c.canonical_bytes())},
           {"hash", c.cert_hash()},
           {"subject", c.subject_name},
           {"serial", c.serial},
           {"is_ca", c.is_ca},
           {"not_before", c.not_before},
           {"not_after", c.not_after}};
}
void from_json(const json& j, Certificate& c) {
  c = Certificate::decode(unb64(j.is_string() ? j : j.at("bytes")));
}

void to_json(json& j, const CertChain& c) { j = c.certs; }
void from_json(const json& j, CertChain& c) { j.get_to(c.certs); }

void to_json(json& j, const RevocationMessage& r) {
  j = json{{"bytes", b64(r.canonical_bytes())},
           {"kind", to_string(r.kind)},
           {"target", r.target_cert_hash},
           {"signer", to_string(r.signer_role)},
           {"depth", r.parent_depth}};
  if (r.rev_timestamp) j["rev_timestamp"] = *r.rev_timestamp;
}
void from_json(const json& j, RevocationMessage& r) {
  r = RevocationMessage::decode(unb64(j.is_string() ? j : j.at("bytes")));
}

void to_json(json& j, const ChainCommitment& c) {
  j = json{{"leaf_cert_hash", c.leaf_cert_hash}, {"timestamps", c.timestamps}, {"signature", c.log_signature}};
}
void from_json(const json& j, ChainCommitment& c) {
  j.at("leaf_cert_hash").get_to(c.leaf_cert_hash);
  j.at("timestamps").get_to(c.timestamps);
  j.at("signature").get_to(c.log_signature);
}

void to_json(json& j, const SignedRoot& r) {
  j = json{{"root", r.root}, {"timestamp", r.timestamp}, {"signature", r.log_signature}};
}
void from_json(const json& j, SignedRoot& r) {
  j.at("root").get_to(r.root);
  j.at("timestamp").get_to(r.timestamp);
  j.at("signature").get_to(r.log_signature);
}

void to_json(json& j, const InclusionProof& p) {
  j = json{{"leaf_index", p.leaf_index}, {"tree_size", p.tree_size}, {"path", p.path}};
}
void from_json(const json& j, InclusionProof& p) {
  j.at("leaf_index").get_to(p.leaf_index);
  j.at("tree_size").get_to(p.tree_size);
  j.at("path").get_to(p.path);
}

void to_json(json& j, const ConsistencyProof& p) {
  j = json{{"old_size", p.old_size}, {"new_size", p.new_size}, {"nodes", p.nodes}};
}
void from_json(const json& j, ConsistencyProof& p) {
  j.at("old_size").get_to(p.old_size);
  j.at("new_size").get_to(p.new_size);
  j.at("nodes").get_to(p.nodes);
}

void to_json(json& j, const TimeTreeEntry& e) {
  j = json{{"kind", to_string(e.kind)}, {"reg_ts", e.reg_timestamp}, {"payload", b64(e.payload)}};
}
void from_json(const json& j, TimeTreeEntry& e) {
  e.kind = entry_kind_from(j.at("kind").get<std::string>());
  j.at("reg_ts").get_to(e.reg_timestamp);
  e.payload = unb64(j.at("payload"));
}

void to_json(json& j, const LoggedRevocation& r) { j = json{{"bytes", b64(r.bytes)}, {"reg_ts", r.reg_ts}}; }
void from_json(const json& j, LoggedRevocation& r) {
  r.bytes = unb64(j.at("bytes"));
  j.at("reg_ts").get_to(r.reg_ts);
}

void to_json(json& j, const LevelRecord& r) {
  j = json{{"id_hash", r.id_hash},           {"revocations", r.revocations},
           {"child_root", r.child_root},     {"leaf_index", r.leaf_index},
           {"subtree_size", r.subtree_size}, {"path", r.path}};
}
void from_json(const json& j, LevelRecord& r) {
  j.at("id_hash").get_to(r.id_hash);
  j.at("revocations").get_to(r.revocations);
  j.at("child_root").get_to(r.child_root);
  j.at("leaf_index").get_to(r.leaf_index);
  j.at("subtree_size").get_to(r.subtree_size);
  j.at("path").get_to(r.path);
}

void to_json(json& j, const RevRootAnchor& a) {
  j = json{{"rev_root", a.rev_root}, {"timestamp", a.timestamp}, {"inclusion", a.inclusion}};
}
void from_json(const json& j, RevRootAnchor& a) {
  j.at("rev_root").get_to(a.rev_root);
  j.at("timestamp").get_to(a.timestamp);
  j.at("inclusion").get_to(a.inclusion);
}

void to_json(json& j, const ChainPresenceProof& p) { j = json{{"levels", p.levels}, {"anchor", p.anchor}}; }
void from_json(const json& j, ChainPresenceProof& p) {
  j.at("levels").get_to(p.levels);
  j.at("anchor").get_to(p.anchor);
}

void to_json(json& j, const AbsenceProof& p) {
  j = json{{"ancestors", p.ancestors},
           {"missing", p.missing},
           {"subtree_size", p.subtree_size},
           {"anchor", p.anchor}};
  opt_to(j, "left", p.left);
  opt_to(j, "right", p.right);
}
void from_json(const json& j, AbsenceProof& p) {
  j.at("ancestors").get_to(p.ancestors);
  j.at("missing").get_to(p.missing);
  j.at("subtree_size").get_to(p.subtree_size);
  j.at("anchor").get_to(p.anchor);
  opt_from(j, "left", p.left);
  opt_from(j, "right", p.right);
}

void to_json(json& j, const PendingRevocation& p) {
  j = json{{"rev_bytes", b64(p.rev_bytes)}, {"commitment", p.commitment}};
}
void from_json(const json& j, PendingRevocation& p) {
  p.rev_bytes = unb64(j.at("rev_bytes"));
  j.at("commitment").get_to(p.commitment);
}

void to_json(json& j, const ProofBundle& b) {
  j = json{{"proof", b.proof}, {"signed_root", b.signed_root}, {"pending", b.pending}};
}
void from_json(const json& j, ProofBundle& b) {
  j.at("proof").get_to(b.proof);
  j.at("signed_root").get_to(b.signed_root);
  j.at("pending").get_to(b.pending);
}

void to_json(json& j, const UpdateRecord& u) {
  j = json{{"signed_root", u.signed_root}, {"tree_size", u.tree_size}, {"batch_start", u.batch_start}};
}
void from_json(const json& j, UpdateRecord& u) {
  j.at("signed_root").get_to(u.signed_root);
  j.at("tree_size").get_to(u.tree_size);
  j.at("batch_start").get_to(u.batch_start);
}

void to_json(json& j, const DeltaItem& i) {
  j = json{{"kind", delta_kind_name(i.kind)}, {"level", i.level}, {"index", i.index}};
  if (i.kind == DeltaItem::Kind::Full) {
    j["payload"] = b64(i.entry);
  } else {
    j["payload"] = i.digest;
  }
}
void from_json(const json& j, DeltaItem& i) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "cover") {
    i.kind = DeltaItem::Kind::Cover;
  } else if (kind == "hash") {
    i.kind = DeltaItem::Kind::Hash;
  } else if (kind == "full") {
    i.kind = DeltaItem::Kind::Full;
  } else {
    throw Error(ErrorCode::Malformed, "unknown delta item kind '" + kind + "'");
  }
  j.at("level").get_to(i.level);
  j.at("index").get_to(i.index);
  if (i.kind == DeltaItem::Kind::Full) {
    i.entry = unb64(j.at("payload"));
    i.digest = Digest{};
  } else {
    j.at("payload").get_to(i.digest);
    i.entry.clear();
  }
}

void to_json(json& j, const DeltaBatch& b) { j = json{{"ts", b.ts}, {"items", b.items}}; }
void from_json(const json& j, DeltaBatch& b) {
  j.at("ts").get_to(b.ts);
  j.at("items").get_to(b.items);
}

void to_json(json& j, const DeltaUpdate& d) {
  j = json{{"from_size", d.from_size}, {"to_size", d.to_size}, {"batches", d.batches}, {"signed_root", d.signed_root}};
}
void from_json(const json& j, DeltaUpdate& d) {
  j.at("from_size").get_to(d.from_size);
  j.at("to_size").get_to(d.to_size);
  j.at("batches").get_to(d.batches);
  j.at("signed_root").get_to(d.signed_root);
}

void to_json(json& j, const TcrlEntry& e) {
  j = json{{"cert_hash", e.cert_hash}, {"rev_bytes", b64(e.rev_bytes)}, {"reg_ts", e.reg_ts}};
}
void from_json(const json& j, TcrlEntry& e) {
  j.at("cert_hash").get_to(e.cert_hash);
  e.rev_bytes = unb64(j.at("rev_bytes"));
  j.at("reg_ts").get_to(e.reg_ts);
}

void to_json(json& j, const TcrlInclusion& i) {
  j = json{{"signed_root", i.signed_root}, {"entry_ts", i.entry_ts}, {"proof", i.proof}};
}
void from_json(const json& j, TcrlInclusion& i) {
  j.at("signed_root").get_to(i.signed_root);
  j.at("entry_ts").get_to(i.entry_ts);
  j.at("proof").get_to(i.proof);
}

void to_json(json& j, const Tcrl& t) {
  j = json{{"version", t.version}, {"issued_at", t.issued_at}, {"entries", t.entries}, {"vendor_sig", t.vendor_signature}};
  j["log_commitment"] = t.commitment ? json(*t.commitment) : json(nullptr);
  opt_to(j, "inclusion", t.inclusion);
}
void from_json(const json& j, Tcrl& t) {
  j.at("version").get_to(t.version);
  j.at("issued_at").get_to(t.issued_at);
  j.at("entries").get_to(t.entries);
  j.at("vendor_sig").get_to(t.vendor_signature);
  opt_from(j, "log_commitment", t.commitment);
  opt_from(j, "inclusion", t.inclusion);
}

void to_json(json& j, const TcrlDelta& d) {
  j = json{{"from_version", d.from_version}, {"to_version", d.to_version}, {"issued_at", d.issued_at},
           {"added", d.added},           {"removed", d.removed},       {"vendor_sig", d.vendor_signature},
           {"new_sig", d.new_signature}};
  j["log_commitment"] = d.commitment ? json(*d.commitment) : json(nullptr);
}
void from_json(const json& j, TcrlDelta& d) {
  j.at("from_version").get_to(d.from_version);
  j.at("to_version").get_to(d.to_version);
  j.at("issued_at").get_to(d.issued_at);
  j.at("added").get_to(d.added);
  j.at("removed").get_to(d.removed);
  j.at("vendor_sig").get_to(d.vendor_signature);
  j.at("new_sig").get_to(d.new_signature);
  opt_from(j, "log_commitment", d.commitment);
}

void to_json(json& j, const LegitimacyPeriod& lp) {
  j = json{{"lp_begin", lp.begin}, {"lp_end", lp.end}, {"cause", to_string(lp.cause)}, {"pending", lp.pending}};
}

void to_json(json& j, const Verdict& v) {
  json per = json::array();
  for (const CertVerdict& c : v.per_cert) {
    json e = c.lp;
    e["cert_hash"] = c.cert_hash;
    per.push_back(std::move(e));
  }
  j = json{{"decision", to_string(v.decision)}, {"reason", to_string(v.reason)}, {"pending", v.pending}, {"per_cert", per}};
}
void from_json(const json& j, Verdict& v) {
  v.decision = j.at("decision").get<std::string>() == "SUCCESS" ? Decision::Success : Decision::Fail;
  v.reason = enum_from(j.at("reason").get<std::string>(),
                       {Reason::None, Reason::PreValidateFail, Reason::ProofMismatch, Reason::StaleRoot,
                        Reason::BadSignature, Reason::RegOutsideParentLP, Reason::LeafRevoked,
                        Reason::LeafExpired, Reason::EmptyLP});
  v.pending = j.value("pending", false);
  v.per_cert.clear();
  for (const json& e : j.at("per_cert")) {
    CertVerdict c;
    e.at("cert_hash").get_to(c.cert_hash);
    e.at("lp_begin").get_to(c.lp.begin);
    e.at("lp_end").get_to(c.lp.end);
    c.lp.cause = enum_from(e.at("cause").get<std::string>(),
                           {LpCause::Expiry, LpCause::VendorRev, LpCause::RkRev, LpCause::ParentRev,
                            LpCause::OwnRev, LpCause::Unrevoked});
    c.lp.pending = e.value("pending", false);
    v.per_cert.push_back(c);
  }
}

void to_json(json& j, const MisbehaviorReport& r) {
  j = json{{"kind", to_string(r.kind)},
           {"detail", r.detail},
           {"roots", r.roots},
           {"revocation", b64(r.revocation)},
           {"chain", r.chain},
           {"timestamps", r.timestamps},
           {"entries", r.entries}};
  opt_to(j, "cc", r.cc);
  opt_to(j, "rev_commitment", r.rev_commitment);
  opt_to(j, "presence", r.presence);
  opt_to(j, "absence", r.absence);
  opt_to(j, "inclusion", r.inclusion);
}
void from_json(const json& j, MisbehaviorReport& r) {
  r.kind = enum_from(j.at("kind").get<std::string>(),
                     {MisbehaviorKind::IncorrectCC, MisbehaviorKind::SuppressedRevocation,
                      MisbehaviorKind::ForkedRoots, MisbehaviorKind::InvalidEntry,
                      MisbehaviorKind::InconsistentRoot});
  r.detail = j.value("detail", "");
  j.at("roots").get_to(r.roots);
  r.revocation = unb64(j.at("revocation"));
  j.at("chain").get_to(r.chain);
  j.at("timestamps").get_to(r.timestamps);
  j.at("entries").get_to(r.entries);
  opt_from(j, "cc", r.cc);
  opt_from(j, "rev_commitment", r.rev_commitment);
  opt_from(j, "presence", r.presence);
  opt_from(j, "absence", r.absence);
  opt_from(j, "inclusion", r.inclusion);
}

json key_to_json(const KeyPair& key) {
  return json{{"role", to_string(key.role())},
              {"seed", b64(key.seed())},
              {"public_key", key.public_key()},
              {"key_id", key.key_id()}};
}

KeyPair key_from_json(const json& j) {
  try {
    KeyPair k = KeyPair::from_seed(key_role_from_string(j.at("role").get<std::string>()),
                                   fixed<32>(unb64(j.at("seed")), "seed"));
    if (j.contains("public_key") && j.at("public_key").get<PublicKey>() != k.public_key()) {
      throw Error(ErrorCode::BadKey, "public key does not match seed");
    }
    return k;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadKey, e.what());
  }
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Malformed, e.what());
  }
}

}  // namespace pkisn
