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

#include "pkisn/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

#include "pkisn/handshake.hpp"

namespace pkisn {

bool ScenarioReport::all_passed() const {
  return std::all_of(expectations.begin(), expectations.end(), [](const auto& e) { return e.pass; });
}

json ScenarioReport::to_json() const {
  json ex = json::array();
  for (const ScenarioExpectation& e : expectations) {
    ex.push_back({{"event", e.event}, {"description", e.description}, {"pass", e.pass}, {"detail", e.detail}});
  }
  json verdicts_json = json::object();
  for (const auto& [label, v] : verdicts) verdicts_json[label] = v;
  return json{{"name", name},         {"passed", all_passed()}, {"expectations", ex},
              {"verdicts", verdicts_json}, {"metrics", metrics},     {"trace", trace}};
}

namespace {

constexpr UnixTime kMinute = 60;
constexpr UnixTime kHour = 3600;
constexpr UnixTime kDay = 86400;
constexpr UnixTime kYear = 365 * kDay;

struct ScriptError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void substitute(json& j, const std::string& pattern, const std::string& value) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    for (std::size_t p = s.find(pattern); p != std::string::npos; p = s.find(pattern, p + value.size())) {
      s.replace(p, pattern.size(), value);
    }
    j = s;
  } else if (j.is_structured()) {
    for (auto& child : j) substitute(child, pattern, value);
  }
}

class Runner {
 public:
  explicit Runner(const json& script)
      : script_(script),
        name_(script.value("name", "scenario")),
        period_(script.value("scheduling_period", kDefaultSchedulingPeriod)),
        now_(script.value("start_time", UnixTime{0})),
        start_(now_) {
    report_.name = name_;
    if (period_ <= 0) throw ScriptError("scheduling_period must be > 0");
  }

  ScenarioReport run() {
    const json& events = script_.at("events");
    for (std::size_t i = 0; i < events.size(); ++i) {
      try {
        exec(events[i], i);
      } catch (const ScriptError& e) {
        throw Error(ErrorCode::Script, "event " + std::to_string(i) + ": " + e.what());
      } catch (const Error& e) {
        throw Error(ErrorCode::Script, "event " + std::to_string(i) + ": " + e.what());
      } catch (const json::exception& e) {
        throw Error(ErrorCode::Script, "event " + std::to_string(i) + ": " + e.what());
      }
    }
    return std::move(report_);
  }

 private:
  struct CertInfo {
    Certificate cert;
    std::string key;
    std::optional<std::string> rk;
    std::optional<std::string> issuer;
  };

  // -- helpers ---------------------------------------------------------------

  static std::string field(const json& ev, const char* name) {
    if (!ev.contains(name) || !ev.at(name).is_string()) {
      throw ScriptError(std::string("missing string field '") + name + "'");
    }
    return ev.at(name).get<std::string>();
  }

  UnixTime time_expr(const json& v) const {
    if (v.is_number_integer()) return v.get<UnixTime>();
    if (!v.is_string()) throw ScriptError("time must be an integer or expression");
    const std::string s = v.get<std::string>();
    UnixTime total = 0;
    std::size_t i = 0;
    int sign = 1;
    bool any = false;
    while (i < s.size()) {
      if (s[i] == ' ') {
        ++i;
        continue;
      }
      if (s[i] == '+' || s[i] == '-') {
        sign = s[i] == '-' ? -1 : 1;
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && s[j] != '+' && s[j] != '-' && s[j] != ' ') ++j;
      const std::string term = s.substr(i, j - i);
      total += sign * term_value(term);
      sign = 1;
      any = true;
      i = j;
    }
    if (!any) throw ScriptError("empty time expression");
    return total;
  }

  UnixTime term_value(const std::string& term) const {
    if (term == "now") return now_;
    if (term == "start") return start_;
    if (term.front() == '$') {
      auto it = vars_.find(term.substr(1));
      if (it == vars_.end()) throw ScriptError("unknown time variable '" + term + "'");
      return it->second;
    }
    std::size_t digits = 0;
    while (digits < term.size() && std::isdigit(static_cast<unsigned char>(term[digits]))) ++digits;
    if (digits == 0) throw ScriptError("bad time term '" + term + "'");
    const UnixTime n = std::stoll(term.substr(0, digits));
    const std::string unit = term.substr(digits);
    if (unit.empty() || unit == "s") return n;
    if (unit == "m") return n * kMinute;
    if (unit == "h") return n * kHour;
    if (unit == "d") return n * kDay;
    if (unit == "y") return n * kYear;
    throw ScriptError("bad time unit in '" + term + "'");
  }

  const KeyPair& key(const std::string& name) const {
    auto it = keys_.find(name);
    if (it == keys_.end()) throw ScriptError("unknown key '" + name + "'");
    return it->second;
  }

  const CertInfo& cert(const std::string& name) const {
    auto it = certs_.find(name);
    if (it == certs_.end()) throw ScriptError("unknown certificate '" + name + "'");
    return it->second;
  }

  CertChain chain_of(const std::string& name) const {
    CertChain chain;
    std::optional<std::string> cur = name;
    while (cur) {
      const CertInfo& info = cert(*cur);
      chain.certs.push_back(info.cert);
      cur = info.issuer;
    }
    std::reverse(chain.certs.begin(), chain.certs.end());
    return chain;
  }

  const KeyPair& vendor() {
    if (!vendor_key_) {
      keys_.emplace("vendor", KeyPair::derive(KeyRole::VendorKey, name_ + "/vendor"));
      vendor_key_ = "vendor";
    }
    return key(*vendor_key_);
  }

  Log& log() {
    if (!log_) {
      LogConfig cfg;
      cfg.scheduling_period = period_;
      cfg.start_time = start_;
      cfg.trust_roots = roots_;
      cfg.vendor_pub = vendor().public_key();
      log_.emplace(cfg, KeyPair::derive(KeyRole::LogKey, name_ + "/log"));
      log_->run_due_updates(now_);
    }
    return *log_;
  }

  void advance_to(UnixTime t) {
    if (t < now_) throw ScriptError("time cannot move backwards");
    now_ = t;
    if (log_) {
      const std::size_t n = log_->run_due_updates(now_);
      if (n > 0) trace("updates: " + std::to_string(n) + ", size " + std::to_string(log_->time_tree().size()));
    }
  }

  void trace(std::string line) { report_.trace.push_back("[" + std::to_string(now_ - start_) + "] " + line); }

  void expect(std::size_t index, std::string description, bool pass, std::string detail = {}) {
    report_.expectations.push_back({index, std::move(description), pass, std::move(detail)});
  }

  // Records an expected-error expectation; returns true when `fn` threw.
  template <typename Fn>
  bool guarded(const json& ev, std::size_t index, const std::string& what, Fn&& fn) {
    if (!ev.contains("expect_error")) {
      fn();
      return false;
    }
    const std::string want = field(ev, "expect_error");
    try {
      fn();
    } catch (const Error& e) {
      const std::string got(to_string(e.code()));
      expect(index, what + " rejected with " + want, got == want, got);
      return true;
    }
    expect(index, what + " rejected with " + want, false, "accepted");
    return true;
  }

  static std::string verdict_text(const Verdict& v) {
    std::string s(to_string(v.decision));
    if (!v.ok()) s += "(" + std::string(to_string(v.reason)) + ")";
    if (v.pending) s += " pending";
    return s;
  }

  // -- events ----------------------------------------------------------------

  void exec(const json& ev, std::size_t index) {
    const std::string op = field(ev, "op");
    if (op == "keygen") {
      const std::string name = field(ev, "name");
      const KeyRole role = key_role_from_string(field(ev, "role"));
      keys_.insert_or_assign(name, KeyPair::derive(role, name_ + "/" + name));
      if (role == KeyRole::VendorKey && !vendor_key_) vendor_key_ = name;
    } else if (op == "issue") {
      op_issue(ev);
    } else if (op == "submit") {
      const std::string name = field(ev, "chain");
      guarded(ev, index, "submit " + name, [&] {
        ChainCommitment cc = log().submit_chain(chain_of(name), now_);
        trace("submit " + name + " -> t=" + std::to_string(cc.timestamps.front() - start_));
        ccs_.insert_or_assign(name, std::move(cc));
      });
    } else if (op == "revoke") {
      op_revoke(ev, index);
    } else if (op == "advance") {
      advance_to(now_ + time_expr(ev.at("by")));
    } else if (op == "set_time") {
      advance_to(time_expr(ev.at("to")));
    } else if (op == "update") {
      log();
      advance_to(now_);
    } else if (op == "mark") {
      vars_[field(ev, "name")] = ev.contains("at") ? time_expr(ev.at("at")) : now_;
    } else if (op == "compromise") {
      const std::string k = field(ev, "key");
      key(k);
      trace("key " + k + " compromised");
    } else if (op == "validate") {
      op_validate(ev, index);
    } else if (op == "expect") {
      const std::string label = field(ev, "verdict");
      auto it = report_.verdicts.find(label);
      if (it == report_.verdicts.end()) throw ScriptError("no verdict '" + label + "'");
      check_verdict(index, label, it->second, ev);
    } else if (op == "expect_count") {
      const std::string prefix = field(ev, "prefix");
      const bool want_ok = field(ev, "decision") == "SUCCESS";
      const auto want = ev.at("count").get<std::size_t>();
      std::size_t n = 0;
      for (const auto& [label, v] : report_.verdicts) {
        if (label.starts_with(prefix) && v.ok() == want_ok) ++n;
      }
      report_.metrics["count:" + prefix + ":" + field(ev, "decision")] = static_cast<double>(n);
      expect(index, std::to_string(want) + " verdicts '" + prefix + "*' are " + field(ev, "decision"), n == want,
             "got " + std::to_string(n));
    } else if (op == "tcrl") {
      op_tcrl(ev);
    } else if (op == "expect_metric") {
      op_expect_metric(ev, index);
    } else if (op == "repeat") {
      const auto count = ev.at("count").get<std::int64_t>();
      const auto from = ev.value("from", std::int64_t{0});
      const std::string pattern = "{" + ev.value("var", std::string("i")) + "}";
      for (std::int64_t k = from; k < from + count; ++k) {
        for (json body : ev.at("events")) {
          substitute(body, pattern, std::to_string(k));
          exec(body, index);
        }
      }
    } else {
      throw ScriptError("unknown op '" + op + "'");
    }
  }

  void op_issue(const json& ev) {
    const std::string name = field(ev, "name");
    CertInfo info;
    info.key = ev.value("key", name);
    IssueParams p;
    p.serial = ev.value("serial", ++serial_);
    p.subject_name = ev.value("subject", name);
    p.subject_public_key = key(info.key).public_key();
    p.is_ca = ev.value("ca", false);
    p.not_before = ev.contains("not_before") ? time_expr(ev.at("not_before")) : now_;
    if (ev.contains("not_after")) {
      p.not_after = time_expr(ev.at("not_after"));
    } else {
      p.not_after = p.not_before + time_expr(ev.value("valid_for", json("1y")));
    }
    if (ev.contains("rk")) {
      info.rk = field(ev, "rk");
      p.revocation_public_key = key(*info.rk).public_key();
    }
    std::string signer = info.key;
    if (ev.contains("issuer")) {
      info.issuer = field(ev, "issuer");
      signer = cert(*info.issuer).key;
    }
    info.cert = issue_certificate(p, key(ev.value("signer", signer)));
    if (!info.issuer) roots_.insert(info.cert.cert_hash());
    trace("issue " + name + (info.issuer ? " by " + *info.issuer : " (root)"));
    certs_.insert_or_assign(name, std::move(info));
  }

  void op_revoke(const json& ev, std::size_t index) {
    const std::string target = field(ev, "target");
    const CertInfo& info = cert(target);
    const std::string kind_s = ev.value("kind", std::string(info.cert.is_ca ? "ca-from" : "leaf"));
    const RevocationKind kind = kind_s == "leaf" ? RevocationKind::LeafRevoke : RevocationKind::CaRevokeFrom;
    const std::string role_s = field(ev, "signer");
    std::optional<UnixTime> rev_ts;
    if (ev.contains("rev_timestamp")) rev_ts = time_expr(ev.at("rev_timestamp"));

    SignerRole role;
    std::uint8_t depth = 0;
    std::string signer;
    if (role_s == "own") {
      role = SignerRole::OwnKey;
      signer = info.key;
    } else if (role_s == "parent") {
      role = SignerRole::ParentCA;
      depth = ev.value("depth", std::uint8_t{1});
      std::string cur = target;
      for (std::uint8_t d = 0; d < depth; ++d) {
        if (!cert(cur).issuer) throw ScriptError("no ancestor at depth " + std::to_string(depth));
        cur = *cert(cur).issuer;
      }
      signer = cert(cur).key;
    } else if (role_s == "rk") {
      role = SignerRole::RevocationKey;
      if (!info.rk) throw ScriptError("'" + target + "' has no revocation key");
      signer = *info.rk;
    } else if (role_s == "vendor") {
      role = SignerRole::Vendor;
      vendor();
      signer = *vendor_key_;
    } else {
      throw ScriptError("unknown signer '" + role_s + "'");
    }
    guarded(ev, index, "revoke " + target, [&] {
      RevocationMessage rev = make_revocation(kind, info.cert, rev_ts, key(ev.value("key", signer)), role, depth);
      RevocationCommitment c = log().submit_revocation(chain_of(target), rev, now_);
      trace("revoke " + target + " by " + role_s + (rev_ts ? " from " + std::to_string(*rev_ts - start_) : "") +
            " -> t=" + std::to_string(c.timestamp - start_));
    });
  }

  void op_validate(const json& ev, std::size_t index) {
    const std::string name = field(ev, "chain");
    const std::string label = ev.value("as", name);
    auto cc = ccs_.find(name);
    if (cc == ccs_.end()) throw ScriptError("chain '" + name + "' was never submitted");
    const CertChain chain = chain_of(name);
    const std::string host = ev.value("name", chain.leaf().subject_name);

    TlsServer server(chain, cc->second);
    Verdict v;
    try {
      server.refresh(log());
      ClientConfig client{log().config().trust_roots, log().public_key(), vendor().public_key(), 2 * period_};
      v = handshake_sim(server, client, host, now_);
    } catch (const Error& e) {
      v = Verdict::fail(Reason::ProofMismatch);
      trace("validate " + label + ": " + e.what());
    }
    trace("validate " + label + " -> " + verdict_text(v));

    if (ev.value("cross_check", false)) {
      if (!tcrl_) throw ScriptError("cross_check needs a TCRL");
      const Verdict t = validate_with_tcrl(chain, cc->second, *tcrl_, host, now_, log().config().trust_roots,
                                           log().public_key(), vendor().public_key());
      expect(index, "TCRL path agrees for " + label, t.decision == v.decision,
             verdict_text(v) + " vs " + verdict_text(t));
    }
    if (ev.contains("expect")) check_verdict(index, label, v, ev.at("expect"));
    report_.verdicts.insert_or_assign(label, std::move(v));
  }

  void check_verdict(std::size_t index, const std::string& label, const Verdict& v, const json& want) {
    const std::string decision = field(want, "decision");
    bool pass = std::string(to_string(v.decision)) == decision;
    std::string description = label + " is " + decision;
    if (want.contains("reason")) {
      const std::string reason = field(want, "reason");
      pass = pass && std::string(to_string(v.reason)) == reason;
      description += "(" + reason + ")";
    }
    if (want.contains("pending")) {
      pass = pass && v.pending == want.at("pending").get<bool>();
      description += want.at("pending").get<bool>() ? " pending" : "";
    }
    expect(index, description, pass, verdict_text(v));
  }

  void op_tcrl(const json& ev) {
    const std::string label = field(ev, "as");
    Log& l = log();
    if (!monitor_) monitor_.emplace(l.public_key(), vendor().public_key(), l.config().trust_roots);
    LocalLogSource source(l);
    monitor_->full_sync(source);
    Tcrl t = build_tcrl(*monitor_, vendor(), now_, ++tcrl_version_);
    commit_tcrl(l, t, vendor().public_key(), now_);
    if (!verify_tcrl(t, vendor().public_key(), l.public_key())) throw ScriptError("fresh TCRL does not verify");
    const double delta_bytes =
        tcrl_ ? static_cast<double>(make_tcrl_delta(*tcrl_, t, vendor()).byte_size()) : static_cast<double>(t.byte_size());
    report_.metrics["tcrl_entries:" + label] = static_cast<double>(t.entries.size());
    report_.metrics["tcrl_bytes:" + label] = static_cast<double>(t.byte_size());
    report_.metrics["tcrl_delta_bytes:" + label] = delta_bytes;
    trace("tcrl " + label + ": " + std::to_string(t.entries.size()) + " entries, delta " +
          std::to_string(static_cast<std::uint64_t>(delta_bytes)) + " bytes");
    tcrl_ = std::move(t);
  }

  double metric_or_number(const json& v) const {
    if (v.is_number()) return v.get<double>();
    const std::string name = v.get<std::string>();
    auto it = report_.metrics.find(name);
    if (it == report_.metrics.end()) throw ScriptError("unknown metric '" + name + "'");
    return it->second;
  }

  void op_expect_metric(const json& ev, std::size_t index) {
    const double l = metric_or_number(ev.at("left"));
    const double r = metric_or_number(ev.at("right"));
    const std::string cmp = field(ev, "cmp");
    bool pass;
    if (cmp == "<") {
      pass = l < r;
    } else if (cmp == "<=") {
      pass = l <= r;
    } else if (cmp == ">") {
      pass = l > r;
    } else if (cmp == ">=") {
      pass = l >= r;
    } else if (cmp == "==") {
      pass = l == r;
    } else {
      throw ScriptError("unknown comparison '" + cmp + "'");
    }
    expect(index, ev.at("left").dump() + " " + cmp + " " + ev.at("right").dump(), pass,
           std::to_string(l) + " vs " + std::to_string(r));
  }

  const json& script_;
  std::string name_;
  UnixTime period_;
  UnixTime now_;
  UnixTime start_;
  ScenarioReport report_;

  std::map<std::string, KeyPair> keys_;
  std::map<std::string, CertInfo> certs_;
  std::map<std::string, ChainCommitment> ccs_;
  std::map<std::string, UnixTime> vars_;
  std::set<Digest> roots_;
  std::optional<std::string> vendor_key_;
  std::optional<Log> log_;
  std::optional<FullMonitor> monitor_;
  std::optional<Tcrl> tcrl_;
  std::uint64_t tcrl_version_ = 0;
  std::uint64_t serial_ = 0;
};

json ev(std::initializer_list<std::pair<const std::string, json>> fields) { return json(std::map<std::string, json>(fields)); }

json backward_availability(bool late_intermediate) {
  json e = json::array();
  auto add = [&](json j) { e.push_back(std::move(j)); };
  add(ev({{"op", "mark"}, {"name", "t0"}}));
  add(ev({{"op", "keygen"}, {"name", "vendor"}, {"role", "vendor"}}));
  for (const char* k : {"a", "b", "e"}) {
    add(ev({{"op", "keygen"}, {"name", k}, {"role", "ca"}}));
    add(ev({{"op", "keygen"}, {"name", std::string(k) + "_rk"}, {"role", "revocation"}}));
  }
  add(ev({{"op", "keygen"}, {"name", "c"}, {"role", "leaf"}}));
  add(ev({{"op", "keygen"}, {"name", "f"}, {"role", "leaf"}}));

  add(ev({{"op", "issue"}, {"name", "a"}, {"subject", "Root A"}, {"ca", true}, {"rk", "a_rk"}, {"valid_for", "10y"}}));
  add(ev({{"op", "submit"}, {"chain", "a"}}));
  add(ev({{"op", "advance"}, {"by", "1h"}}));

  auto register_b_c = [&] {
    add(ev({{"op", "issue"}, {"name", "b"}, {"subject", "Intermediate B"}, {"issuer", "a"}, {"ca", true},
            {"rk", "b_rk"}, {"valid_for", "5y"}}));
    add(ev({{"op", "submit"}, {"chain", "b"}}));
    add(ev({{"op", "advance"}, {"by", "1h"}}));
    add(ev({{"op", "issue"}, {"name", "c"}, {"subject", "c.example"}, {"issuer", "b"}, {"valid_for", "1y"}}));
    add(ev({{"op", "submit"}, {"chain", "c"}}));
    add(ev({{"op", "advance"}, {"by", "1h"}}));
  };

  if (!late_intermediate) register_b_c();
  add(ev({{"op", "advance"}, {"by", "1d"}}));
  add(ev({{"op", "mark"}, {"name", "t_att"}}));
  add(ev({{"op", "compromise"}, {"key", "a"}}));
  add(ev({{"op", "advance"}, {"by", "2h"}}));
  if (late_intermediate) register_b_c();

  // The adversary revokes B from the very beginning with A's key and
  // registers a rogue intermediate E with leaf F.
  add(ev({{"op", "revoke"}, {"target", "b"}, {"kind", "ca-from"}, {"rev_timestamp", "$t0"}, {"signer", "parent"}}));
  add(ev({{"op", "issue"}, {"name", "e"}, {"subject", "Rogue E"}, {"issuer", "a"}, {"ca", true}, {"rk", "e_rk"},
          {"valid_for", "5y"}}));
  add(ev({{"op", "issue"}, {"name", "f"}, {"subject", "f.example"}, {"issuer", "e"}, {"valid_for", "1y"}}));
  add(ev({{"op", "submit"}, {"chain", "f"}}));
  add(ev({{"op", "advance"}, {"by", "1h"}}));
  add(ev({{"op", "validate"}, {"chain", "c"}, {"as", "c_under_attack"},
          {"expect", ev({{"decision", "FAIL"}, {"reason", "RegOutsideParentLP"}})}}));
  add(ev({{"op", "validate"}, {"chain", "f"}, {"as", "f_under_attack"}, {"expect", ev({{"decision", "SUCCESS"}})}}));

  // Detection: A is revoked with its revocation key from the attack time.
  add(ev({{"op", "advance"}, {"by", "1d"}}));
  add(ev({{"op", "revoke"}, {"target", "a"}, {"kind", "ca-from"}, {"rev_timestamp", "$t_att"}, {"signer", "rk"}}));
  add(ev({{"op", "advance"}, {"by", "1h"}}));
  if (late_intermediate) {
    add(ev({{"op", "validate"}, {"chain", "c"}, {"as", "c_after_detection"},
            {"expect", ev({{"decision", "FAIL"}, {"reason", "RegOutsideParentLP"}})}}));
  } else {
    add(ev({{"op", "validate"}, {"chain", "c"}, {"as", "c_after_detection"}, {"expect", ev({{"decision", "SUCCESS"}})}}));
  }
  add(ev({{"op", "validate"}, {"chain", "f"}, {"as", "f_after_detection"},
          {"expect", ev({{"decision", "FAIL"}, {"reason", "RegOutsideParentLP"}})}}));
  // A second use of A's revocation key is refused.
  add(ev({{"op", "revoke"}, {"target", "a"}, {"kind", "ca-from"}, {"rev_timestamp", "$t0"}, {"signer", "rk"},
          {"expect_error", "DuplicateRkRevocation"}}));

  return json{{"name", late_intermediate ? "fig2_attack_late" : "fig2_attack"},
              {"scheduling_period", 3600},
              {"start_time", 1700000000},
              {"events", e}};
}

json too_big() {
  json e = json::array();
  auto add = [&](json j) { e.push_back(std::move(j)); };
  add(ev({{"op", "keygen"}, {"name", "vendor"}, {"role", "vendor"}}));
  add(ev({{"op", "keygen"}, {"name", "root"}, {"role", "ca"}}));
  add(ev({{"op", "keygen"}, {"name", "root_rk"}, {"role", "revocation"}}));
  add(ev({{"op", "keygen"}, {"name", "ica"}, {"role", "ca"}}));
  add(ev({{"op", "keygen"}, {"name", "ica_rk"}, {"role", "revocation"}}));
  add(ev({{"op", "issue"}, {"name", "root"}, {"subject", "Big Root"}, {"ca", true}, {"rk", "root_rk"}, {"valid_for", "20y"}}));
  add(ev({{"op", "issue"}, {"name", "ica"}, {"subject", "Big Issuing CA"}, {"issuer", "root"}, {"ca", true},
          {"rk", "ica_rk"}, {"valid_for", "12y"}}));
  add(ev({{"op", "submit"}, {"chain", "ica"}}));
  add(ev({{"op", "advance"}, {"by", "1d"}}));
  add(ev({{"op", "mark"}, {"name", "window_start"}}));
  // 1000 leaves, one every 2.92 days: 2920 days in total.
  json body = json::array();
  body.push_back(ev({{"op", "keygen"}, {"name", "leaf_{i}"}, {"role", "leaf"}}));
  body.push_back(ev({{"op", "issue"}, {"name", "leaf_{i}"}, {"subject", "site{i}.example"}, {"issuer", "ica"},
                     {"not_after", "$window_start+9y"}}));
  body.push_back(ev({{"op", "submit"}, {"chain", "leaf_{i}"}}));
  body.push_back(ev({{"op", "advance"}, {"by", 252288}}));
  add(ev({{"op", "repeat"}, {"count", 1000}, {"events", body}}));
  add(ev({{"op", "mark"}, {"name", "end"}}));
  add(ev({{"op", "mark"}, {"name", "t_comp"}, {"at", "$end-7d"}}));
  add(ev({{"op", "compromise"}, {"key", "ica"}}));
  add(ev({{"op", "keygen"}, {"name", "rogue"}, {"role", "leaf"}}));
  add(ev({{"op", "issue"}, {"name", "rogue"}, {"subject", "bank.example"}, {"issuer", "ica"}, {"valid_for", "1y"}}));
  add(ev({{"op", "submit"}, {"chain", "rogue"}}));
  add(ev({{"op", "revoke"}, {"target", "ica"}, {"kind", "ca-from"}, {"rev_timestamp", "$t_comp"}, {"signer", "rk"}}));
  add(ev({{"op", "advance"}, {"by", "1d"}}));
  add(ev({{"op", "repeat"}, {"count", 1000},
          {"events", json::array({ev({{"op", "validate"}, {"chain", "leaf_{i}"}})})}}));
  // Leaves 998 and 999 are registered on or after day 2913 of the window.
  add(ev({{"op", "expect_count"}, {"prefix", "leaf_"}, {"decision", "FAIL"}, {"count", 2}}));
  add(ev({{"op", "expect_count"}, {"prefix", "leaf_"}, {"decision", "SUCCESS"}, {"count", 998}}));
  add(ev({{"op", "validate"}, {"chain", "rogue"},
          {"expect", ev({{"decision", "FAIL"}, {"reason", "RegOutsideParentLP"}})}}));
  return json{{"name", "too_big"}, {"scheduling_period", 86400}, {"start_time", 1600000000}, {"events", e}};
}

json heartbleed_spike() {
  json e = json::array();
  auto add = [&](json j) { e.push_back(std::move(j)); };
  add(ev({{"op", "keygen"}, {"name", "vendor"}, {"role", "vendor"}}));
  add(ev({{"op", "keygen"}, {"name", "root"}, {"role", "ca"}}));
  add(ev({{"op", "keygen"}, {"name", "root_rk"}, {"role", "revocation"}}));
  add(ev({{"op", "keygen"}, {"name", "ica"}, {"role", "ca"}}));
  add(ev({{"op", "keygen"}, {"name", "ica_rk"}, {"role", "revocation"}}));
  add(ev({{"op", "issue"}, {"name", "root"}, {"subject", "HB Root"}, {"ca", true}, {"rk", "root_rk"}, {"valid_for", "20y"}}));
  add(ev({{"op", "issue"}, {"name", "ica"}, {"subject", "HB Issuing CA"}, {"issuer", "root"}, {"ca", true},
          {"rk", "ica_rk"}, {"valid_for", "10y"}}));
  add(ev({{"op", "submit"}, {"chain", "ica"}}));
  auto leaves = [&](int from, int count, const char* validity) {
    json body = json::array();
    body.push_back(ev({{"op", "keygen"}, {"name", "leaf_{i}"}, {"role", "leaf"}}));
    body.push_back(ev({{"op", "issue"}, {"name", "leaf_{i}"}, {"subject", "site{i}.example"}, {"issuer", "ica"},
                       {"valid_for", validity}}));
    body.push_back(ev({{"op", "submit"}, {"chain", "leaf_{i}"}}));
    add(ev({{"op", "repeat"}, {"from", from}, {"count", count}, {"events", body}}));
  };
  leaves(0, 100, "400d");
  leaves(100, 100, "40d");
  add(ev({{"op", "advance"}, {"by", "1d"}}));
  add(ev({{"op", "tcrl"}, {"as", "base"}}));

  add(ev({{"op", "revoke"}, {"target", "leaf_0"}, {"signer", "own"}}));
  add(ev({{"op", "advance"}, {"by", "1d"}}));
  add(ev({{"op", "tcrl"}, {"as", "pre"}}));

  add(ev({{"op", "repeat"}, {"from", 100}, {"count", 60},
          {"events", json::array({ev({{"op", "revoke"}, {"target", "leaf_{i}"}, {"signer", "own"}})})}}));
  add(ev({{"op", "advance"}, {"by", "1d"}}));
  add(ev({{"op", "tcrl"}, {"as", "spike"}}));

  add(ev({{"op", "revoke"}, {"target", "leaf_1"}, {"signer", "parent"}}));
  add(ev({{"op", "advance"}, {"by", "1d"}}));
  add(ev({{"op", "tcrl"}, {"as", "post"}}));
  for (const char* leaf : {"leaf_0", "leaf_1", "leaf_2", "leaf_100", "leaf_170"}) {
    add(ev({{"op", "validate"}, {"chain", leaf}, {"cross_check", true}}));
  }
  add(ev({{"op", "expect"}, {"verdict", "leaf_100"}, {"decision", "FAIL"}, {"reason", "LeafRevoked"}}));
  add(ev({{"op", "expect"}, {"verdict", "leaf_170"}, {"decision", "SUCCESS"}}));

  add(ev({{"op", "advance"}, {"by", "45d"}}));
  add(ev({{"op", "tcrl"}, {"as", "expired"}}));
  add(ev({{"op", "validate"}, {"chain", "leaf_0"}, {"cross_check", true}}));
  add(ev({{"op", "validate"}, {"chain", "leaf_2"}, {"cross_check", true}}));

  add(ev({{"op", "expect_metric"}, {"left", "tcrl_delta_bytes:spike"}, {"cmp", ">"}, {"right", "tcrl_delta_bytes:pre"}}));
  add(ev({{"op", "expect_metric"}, {"left", "tcrl_delta_bytes:post"}, {"cmp", "<"}, {"right", "tcrl_delta_bytes:spike"}}));
  add(ev({{"op", "expect_metric"}, {"left", "tcrl_delta_bytes:expired"}, {"cmp", "<"}, {"right", "tcrl_delta_bytes:spike"}}));
  add(ev({{"op", "expect_metric"}, {"left", "tcrl_entries:spike"}, {"cmp", "==" }, {"right", 61}}));
  add(ev({{"op", "expect_metric"}, {"left", "tcrl_entries:expired"}, {"cmp", "<"}, {"right", "tcrl_entries:spike"}}));
  return json{{"name", "heartbleed_spike"}, {"scheduling_period", 86400}, {"start_time", 1396000000}, {"events", e}};
}

}  // namespace

ScenarioReport run_scenario(const json& script) {
  try {
    return Runner(script).run();
  } catch (const ScriptError& e) {
    throw Error(ErrorCode::Script, e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Script, e.what());
  }
}

std::vector<std::string> builtin_scenario_names() {
  return {"fig2_attack", "fig2_attack_late", "too_big", "heartbleed_spike"};
}

json builtin_scenario(std::string_view name) {
  if (name == "fig2_attack") return backward_availability(false);
  if (name == "fig2_attack_late") return backward_availability(true);
  if (name == "too_big") return too_big();
  if (name == "heartbleed_spike") return heartbleed_spike();
  throw Error(ErrorCode::Script, "unknown built-in scenario '" + std::string(name) + "'");
}

}  // namespace pkisn
