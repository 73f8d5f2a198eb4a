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

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "pkisn/bench.hpp"
#include "pkisn/deployment.hpp"
#include "pkisn/scenario.hpp"
#include "pkisn/service.hpp"
#include "pkisn/tcrl.hpp"
#include "pkisn/validator.hpp"
#include "pkisn/wire.hpp"

namespace fs = std::filesystem;
using namespace pkisn;

namespace {

struct Globals {
  std::optional<fs::path> config;
  std::string url;
  std::string now = "now";
  std::string output;
};

UnixTime parse_duration(const std::string& s) {
  if (s.empty()) throw Error(ErrorCode::Malformed, "empty duration");
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Malformed, "bad duration '" + s + "'");
  }
  std::string unit = s.substr(used);
  UnixTime mul = 1;
  if (unit.empty() || unit == "s") mul = 1;
  else if (unit == "m") mul = 60;
  else if (unit == "h") mul = 3600;
  else if (unit == "d") mul = 86400;
  else if (unit == "y") mul = 365 * 86400;
  else throw Error(ErrorCode::Malformed, "bad duration unit in '" + s + "'");
  return n * mul;
}

/// Unix seconds, "now", or now±duration.
UnixTime parse_time(const std::string& s) {
  if (s.rfind("now", 0) == 0) {
    UnixTime t = wall_clock_now();
    if (s.size() == 3) return t;
    UnixTime d = parse_duration(s.substr(4));
    if (s[3] == '+') return t + d;
    if (s[3] == '-') return t - d;
    throw Error(ErrorCode::Malformed, "bad time '" + s + "'");
  }
  return parse_duration(s);
}

void emit(const Globals& g, const json& j) {
  if (g.output.empty() || g.output == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_file(g.output, j);
  }
}

template <typename T>
T load_as(const std::string& file) {
  return parse_as<T>(read_json_file(file));
}

PublicKey load_public_key(const std::string& file) {
  json j = read_json_file(file);
  if (j.is_object() && j.contains("public_key")) return parse_as<PublicKey>(j.at("public_key"));
  return parse_as<PublicKey>(j);
}

struct Context {
  explicit Context(const Globals& g) : globals(g), config(ServiceConfig::resolve(g.config)) {}

  Deployment& deployment() {
    if (!deployment_) deployment_ = Deployment::prepare(config, now());
    return *deployment_;
  }
  Log& log() {
    if (!log_) log_ = std::make_unique<Log>(deployment().open_log());
    return *log_;
  }
  LogClient* client() {
    if (globals.url.empty()) return nullptr;
    if (!client_) client_ = std::make_unique<LogClient>(globals.url);
    return client_.get();
  }
  LogSource& source() {
    if (auto* c = client()) return *c;
    if (!local_source_) local_source_ = std::make_unique<LocalLogSource>(log());
    return *local_source_;
  }
  UnixTime now() const { return parse_time(globals.now); }

  const Globals& globals;
  ServiceConfig config;

 private:
  std::optional<Deployment> deployment_;
  std::unique_ptr<Log> log_;
  std::unique_ptr<LogClient> client_;
  std::unique_ptr<LocalLogSource> local_source_;
};

struct IssueOpts {
  std::string key;
  std::string subject_key;
  std::string issuer_chain;
  std::string name;
  std::string rk_key;
  std::string not_before;
  std::string not_after;
  std::string valid_for = "1y";
  std::uint64_t serial = 1;
  bool ca = false;
  bool trust = false;
};

IssueParams issue_params(const IssueOpts& o, const PublicKey& subject, bool ca, UnixTime now) {
  IssueParams p;
  p.serial = o.serial;
  p.subject_name = o.name;
  p.subject_public_key = subject;
  p.is_ca = ca;
  p.not_before = o.not_before.empty() ? now : parse_time(o.not_before);
  p.not_after = o.not_after.empty() ? p.not_before + parse_duration(o.valid_for)
                                    : parse_time(o.not_after);
  if (!o.rk_key.empty()) p.revocation_public_key = load_public_key(o.rk_key);
  return p;
}

void add_issue_options(CLI::App* cmd, IssueOpts& o) {
  cmd->add_option("--name", o.name, "Subject name")->required();
  cmd->add_option("--rk-key", o.rk_key, "Revocation key (public part is embedded)");
  cmd->add_option("--not-before", o.not_before, "Unix time or now[+-]dur (default now)");
  cmd->add_option("--not-after", o.not_after, "Unix time or now[+-]dur");
  cmd->add_option("--valid-for", o.valid_for, "Validity if --not-after is absent, e.g. 90d");
  cmd->add_option("--serial", o.serial, "Serial number");
}

struct RevokeOpts {
  std::string chain;
  long target_index = -1;
  std::string kind = "leaf";
  std::string rev_timestamp;
  std::string signer = "own";
  std::string key;
  int depth = 1;
};

struct ValidateOpts {
  std::string chain;
  std::string cc;
  std::string proof;
  std::string tcrl;
  std::string name;
  std::string trust_roots;
  std::string log_pub;
  std::string vendor_pub;
  UnixTime max_root_age = 0;
};

int run_validate(Context& ctx, const ValidateOpts& o) {
  auto chain = load_as<CertChain>(o.chain);
  auto cc = load_as<ChainCommitment>(o.cc);
  std::set<Digest> roots;
  if (!o.trust_roots.empty()) {
    roots = load_as<std::set<Digest>>(o.trust_roots);
  } else {
    roots = ctx.deployment().trust_roots();
  }
  PublicKey log_pub = o.log_pub.empty() ? ctx.deployment().log_key().public_key()
                                        : load_public_key(o.log_pub);
  PublicKey vendor_pub = o.vendor_pub.empty() ? ctx.deployment().vendor_key().public_key()
                                              : load_public_key(o.vendor_pub);
  std::string name = o.name.empty() ? chain.leaf().subject_name : o.name;

  Verdict v;
  if (!o.tcrl.empty()) {
    v = validate_with_tcrl(chain, cc, load_as<Tcrl>(o.tcrl), name, ctx.now(), roots, log_pub,
                           vendor_pub);
  } else {
    ProofBundle bundle;
    if (!o.proof.empty()) {
      bundle = load_as<ProofBundle>(o.proof);
    } else if (auto* c = ctx.client()) {
      bundle = c->get_proof(proof_query(chain, cc));
    } else {
      bundle = ctx.log().get_proof(proof_query(chain, cc));
    }
    ValidationInput in;
    in.chain = chain;
    in.cc = cc;
    in.proof = bundle.proof;
    in.signed_root = bundle.signed_root;
    in.pending_revocations = bundle.pending;
    in.name = name;
    in.now = ctx.now();
    in.trust_roots = roots;
    in.log_pub = log_pub;
    in.vendor_pub = vendor_pub;
    in.max_root_age = o.max_root_age > 0 ? o.max_root_age : ctx.config.max_root_age;
    v = is_valid(in);
  }
  emit(ctx.globals, json(v));
  return v.ok() ? 0 : 2;
}

std::atomic<httplib::Server*> g_server{nullptr};

void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

int run_serve(Context& ctx) {
  Deployment& d = ctx.deployment();
  auto colon = ctx.config.listen_address.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::Config, "listen_address must be host:port");
  }
  std::string host = ctx.config.listen_address.substr(0, colon);
  int port = std::stoi(ctx.config.listen_address.substr(colon + 1));

  Service service(d.open_log(), d.vendor_key().public_key(), ctx.config.prune_grace,
                  wall_clock_now);
  service.tick();
  httplib::Server server;
  service.attach(server);
  service.start_ticker(std::chrono::seconds(1));

  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "pkisn: serving on " << host << ":" << port << " (data " << ctx.config.data_dir
            << ", log key " << d.log_key().key_id().hex() << ")\n";
  bool ok = server.listen(host, port);
  g_server = nullptr;
  service.stop_ticker();
  if (!ok) throw Error(ErrorCode::Config, "cannot listen on " + ctx.config.listen_address);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PKISN log, monitor and validation tool"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Config file (default $PKISN_CONFIG)");
  app.add_option("--url", g.url, "Talk to a running service instead of the local data dir");
  app.add_option("--now", g.now, "Current time: Unix seconds or now[+-]dur");
  app.add_option("-o,--output", g.output, "Write JSON output to a file");

  std::function<int(Context&)> action;

  // keygen
  std::string role;
  std::string label;
  auto* keygen = app.add_subcommand("keygen", "Create a key pair");
  keygen->add_option("--role", role, "ca, leaf, revocation, vendor or log")->required();
  keygen->add_option("--label", label, "Derive the key deterministically from a label");
  keygen->callback([&] {
    action = [&](Context& ctx) {
      KeyRole r = key_role_from_string(role);
      KeyPair k = label.empty() ? KeyPair::generate(r) : KeyPair::derive(r, label);
      emit(ctx.globals, key_to_json(k));
      return 0;
    };
  });

  // ca
  IssueOpts issue;
  auto* ca = app.add_subcommand("ca", "Issue certificates");
  ca->require_subcommand(1);
  auto* ca_init = ca->add_subcommand("init", "Create a self-signed root CA");
  ca_init->add_option("--key", issue.key, "Root CA key")->required();
  add_issue_options(ca_init, issue);
  ca_init->add_flag("--trust", issue.trust, "Add the root to the deployment's trust roots");
  ca_init->callback([&] {
    action = [&](Context& ctx) {
      KeyPair key = key_from_json(read_json_file(issue.key));
      Certificate cert =
          issue_certificate(issue_params(issue, key.public_key(), true, ctx.now()), key);
      if (issue.trust) ctx.deployment().add_trust_root(cert.cert_hash());
      emit(ctx.globals, json(CertChain{{cert}}));
      return 0;
    };
  });
  auto* ca_issue = ca->add_subcommand("issue", "Issue a certificate under a CA chain");
  ca_issue->add_option("--issuer-chain", issue.issuer_chain, "Chain ending in the issuing CA")
      ->required();
  ca_issue->add_option("--issuer-key", issue.key, "Key of the issuing CA")->required();
  ca_issue->add_option("--subject-key", issue.subject_key, "Subject key or public key")
      ->required();
  ca_issue->add_flag("--ca", issue.ca, "Issue a CA certificate");
  add_issue_options(ca_issue, issue);
  ca_issue->callback([&] {
    action = [&](Context& ctx) {
      auto chain = load_as<CertChain>(issue.issuer_chain);
      if (chain.empty() || !chain.leaf().is_ca) {
        throw Error(ErrorCode::InvalidChain, "issuer chain must end in a CA certificate");
      }
      KeyPair key = key_from_json(read_json_file(issue.key));
      if (key.key_id() != chain.leaf().subject_public_key.key_id()) {
        throw Error(ErrorCode::BadKey, "issuer key does not match the issuing CA");
      }
      chain.certs.push_back(issue_certificate(
          issue_params(issue, load_public_key(issue.subject_key), issue.ca, ctx.now()), key));
      emit(ctx.globals, json(chain));
      return 0;
    };
  });

  // submit
  std::string chain_file;
  auto* submit = app.add_subcommand("submit", "Register a chain and print its commitment");
  submit->add_option("--chain", chain_file, "Chain file")->required();
  submit->callback([&] {
    action = [&](Context& ctx) {
      auto chain = load_as<CertChain>(chain_file);
      ChainCommitment cc = ctx.client() ? ctx.client()->submit_chain(chain)
                                        : ctx.log().submit_chain(chain, ctx.now());
      emit(ctx.globals, json(cc));
      return 0;
    };
  });

  // revoke
  RevokeOpts rv;
  auto* revoke = app.add_subcommand("revoke", "Sign and submit a revocation");
  revoke->add_option("--chain", rv.chain, "Chain containing the target")->required();
  revoke->add_option("--target-index", rv.target_index, "Index of the target (default leaf)");
  revoke->add_option("--kind", rv.kind, "leaf or ca-from")
      ->check(CLI::IsMember({"leaf", "ca-from"}));
  revoke->add_option("--rev-timestamp", rv.rev_timestamp, "Revoke-from time for ca-from");
  revoke->add_option("--signer", rv.signer, "own, parent, rk or vendor")
      ->check(CLI::IsMember({"own", "parent", "rk", "vendor"}));
  revoke->add_option("--key", rv.key, "Signing key (vendor defaults to the deployment's)");
  revoke->add_option("--depth", rv.depth, "Levels above the target for parent revocations");
  revoke->callback([&] {
    action = [&](Context& ctx) {
      auto chain = load_as<CertChain>(rv.chain);
      if (chain.empty()) throw Error(ErrorCode::InvalidChain, "empty chain");
      std::size_t idx = rv.target_index < 0 ? chain.size() - 1
                                            : static_cast<std::size_t>(rv.target_index);
      if (idx >= chain.size()) throw Error(ErrorCode::Malformed, "target index out of range");
      RevocationKind kind = rv.kind == "leaf" ? RevocationKind::LeafRevoke
                                              : RevocationKind::CaRevokeFrom;
      SignerRole signer = rv.signer == "own"      ? SignerRole::OwnKey
                          : rv.signer == "parent" ? SignerRole::ParentCA
                          : rv.signer == "rk"     ? SignerRole::RevocationKey
                                                  : SignerRole::Vendor;
      std::optional<UnixTime> rev_ts;
      if (kind == RevocationKind::CaRevokeFrom) {
        if (rv.rev_timestamp.empty()) {
          throw Error(ErrorCode::Malformed, "ca-from revocations need --rev-timestamp");
        }
        rev_ts = parse_time(rv.rev_timestamp);
      }
      std::optional<KeyPair> key;
      if (!rv.key.empty()) key = key_from_json(read_json_file(rv.key));
      else if (signer == SignerRole::Vendor) key = ctx.deployment().vendor_key();
      else throw Error(ErrorCode::Malformed, "--key is required for this signer");
      std::uint8_t depth = signer == SignerRole::ParentCA ? static_cast<std::uint8_t>(rv.depth) : 0;
      RevocationMessage rev =
          make_revocation(kind, chain.certs[idx], rev_ts, *key, signer, depth);
      CertChain prefix{{chain.certs.begin(), chain.certs.begin() + static_cast<long>(idx) + 1}};
      RevocationCommitment c = ctx.client() ? ctx.client()->submit_revocation(prefix, rev)
                                            : ctx.log().submit_revocation(prefix, rev, ctx.now());
      emit(ctx.globals, json{{"revocation", rev}, {"commitment", c}});
      return 0;
    };
  });

  // proof
  std::string cc_file;
  auto* proof = app.add_subcommand("proof", "Fetch the presence proof for a chain");
  proof->add_option("--chain", chain_file, "Chain file")->required();
  proof->add_option("--cc", cc_file, "Chain commitment file")->required();
  proof->callback([&] {
    action = [&](Context& ctx) {
      auto chain = load_as<CertChain>(chain_file);
      auto query = proof_query(chain, load_as<ChainCommitment>(cc_file));
      ProofBundle b = ctx.client() ? ctx.client()->get_proof(query) : ctx.log().get_proof(query);
      emit(ctx.globals, json(b));
      return 0;
    };
  });

  // validate
  ValidateOpts vo;
  auto* validate = app.add_subcommand("validate", "Validate a chain (exit 2 on FAIL)");
  validate->add_option("--chain", vo.chain, "Chain file")->required();
  validate->add_option("--cc", vo.cc, "Chain commitment file")->required();
  validate->add_option("--proof", vo.proof, "Proof bundle (fetched from the log if absent)");
  validate->add_option("--tcrl", vo.tcrl, "Validate against a TCRL instead of a proof");
  validate->add_option("--name", vo.name, "Expected name (default leaf subject)");
  validate->add_option("--trust-roots", vo.trust_roots, "JSON array of root cert hashes");
  validate->add_option("--log-pub", vo.log_pub, "Log public key");
  validate->add_option("--vendor-pub", vo.vendor_pub, "Vendor public key");
  validate->add_option("--max-root-age", vo.max_root_age, "Seconds");
  validate->callback([&] { action = [&](Context& ctx) { return run_validate(ctx, vo); }; });

  // update
  auto* update = app.add_subcommand("update", "Run every update due at --now");
  update->callback([&] {
    action = [&](Context& ctx) {
      Log& log = ctx.log();
      UnixTime now = ctx.now();
      if (now < log.next_update_time()) {
        throw Error(ErrorCode::UpdateTooEarly,
                    "next update is due at " + std::to_string(log.next_update_time()));
      }
      std::size_t n = log.run_due_updates(now);
      emit(ctx.globals, json{{"updates_run", n},
                             {"tree_size", log.time_tree().size()},
                             {"signed_root", *log.latest_root()},
                             {"next_update", log.next_update_time()}});
      return 0;
    };
  });

  // monitor
  std::string root_file;
  std::vector<std::string> delta_files;
  std::uint64_t delta_from = 0;
  bool delta_compact = false;
  auto* monitor = app.add_subcommand("monitor", "Monitor a log");
  monitor->require_subcommand(1);
  auto full_sync = [](Context& ctx) {
    auto m = std::make_unique<FullMonitor>(ctx.deployment().log_key().public_key(),
                                           ctx.deployment().vendor_key().public_key(),
                                           ctx.deployment().trust_roots());
    m->full_sync(ctx.source());
    return m;
  };
  auto* m_sync = monitor->add_subcommand("sync", "Replay the whole log and check every entry");
  m_sync->callback([&] {
    action = [&](Context& ctx) {
      try {
        auto m = full_sync(ctx);
        json out{{"tree_size", m->tree_size()},
                 {"updates", m->updates().size()},
                 {"revoked_certs", m->revoked_certs().size()}};
        if (auto r = m->latest_root()) out["signed_root"] = *r;
        emit(ctx.globals, out);
        return 0;
      } catch (const MisbehaviorError& e) {
        emit(ctx.globals, json{{"misbehavior", e.report()}, {"error", e.what()}});
        return 3;
      }
    };
  });
  auto* m_check = monitor->add_subcommand("check-root", "Check a client's signed root");
  m_check->add_option("--root", root_file, "Signed root file")->required();
  m_check->callback([&] {
    action = [&](Context& ctx) {
      auto m = full_sync(ctx);
      RootCheck rc = m->check_root(load_as<SignedRoot>(root_file));
      json out{{"consistent", rc.consistent}};
      if (rc.fork) out["report"] = *rc.fork;
      emit(ctx.globals, out);
      return rc.consistent ? 0 : 3;
    };
  });
  auto* m_delta = monitor->add_subcommand("delta-apply", "Apply deltas to a lightweight monitor");
  m_delta->add_option("--delta", delta_files, "Delta files in order (fetched if absent)");
  m_delta->add_option("--from", delta_from, "Fetch the delta starting at this size");
  m_delta->add_flag("--compact", delta_compact, "Then drop entries that have expired since");
  m_delta->callback([&] {
    action = [&](Context& ctx) {
      LightMonitor lm(ctx.deployment().log_key().public_key());
      std::vector<DeltaUpdate> deltas;
      for (const auto& f : delta_files) deltas.push_back(load_as<DeltaUpdate>(f));
      if (deltas.empty()) {
        if (auto* c = ctx.client()) {
          deltas.push_back(c->delta(delta_from));
        } else {
          deltas.push_back(build_delta(ctx.log(), delta_from,
                                       PruneParams{ctx.now(), ctx.config.prune_grace}));
        }
      }
      for (const auto& d : deltas) lm.apply_delta(d);
      std::size_t dropped = 0;
      if (delta_compact) {
        auto* c = ctx.client();
        dropped = lm.compact(c ? c->compaction(lm.size())
                               : build_compaction(ctx.log(), lm.size(), PruneParams{ctx.now(), ctx.config.prune_grace}));
      }
      emit(ctx.globals, json{{"size", lm.size()},
                             {"dropped", dropped},
                             {"root", lm.root()},
                             {"nodes", lm.node_count()},
                             {"storage_bytes", lm.storage_bytes()}});
      return 0;
    };
  });

  // tcrl
  std::string tcrl_file;
  std::uint64_t tcrl_version = 1;
  bool no_commit = false;
  bool require_inclusion = false;
  auto* tcrl = app.add_subcommand("tcrl", "Build and check trimmed revocation lists");
  tcrl->require_subcommand(1);
  auto* t_build = tcrl->add_subcommand("build", "Build, sign and commit a TCRL");
  t_build->add_option("--version", tcrl_version, "TCRL version number");
  t_build->add_flag("--no-commit", no_commit, "Do not submit the TCRL to the log");
  t_build->callback([&] {
    action = [&](Context& ctx) {
      auto m = full_sync(ctx);
      Tcrl t = build_tcrl(*m, ctx.deployment().vendor_key(), ctx.now(), tcrl_version);
      if (!no_commit) {
        if (auto* c = ctx.client()) {
          t.commitment = c->submit_tcrl(t);
        } else {
          commit_tcrl(ctx.log(), t, ctx.deployment().vendor_key().public_key(), ctx.now());
        }
      }
      emit(ctx.globals, json(t));
      return 0;
    };
  });
  auto* t_attach = tcrl->add_subcommand("attach", "Attach the log inclusion proof to a TCRL");
  t_attach->add_option("--tcrl", tcrl_file, "TCRL file")->required();
  t_attach->callback([&] {
    action = [&](Context& ctx) {
      auto t = load_as<Tcrl>(tcrl_file);
      attach_inclusion(ctx.log(), t);
      emit(ctx.globals, json(t));
      return 0;
    };
  });
  auto* t_verify = tcrl->add_subcommand("verify", "Check the vendor signature and log evidence");
  t_verify->add_option("--tcrl", tcrl_file, "TCRL file")->required();
  t_verify->add_flag("--require-inclusion", require_inclusion, "Reject commitment-only TCRLs");
  t_verify->callback([&] {
    action = [&](Context& ctx) {
      auto t = load_as<Tcrl>(tcrl_file);
      bool ok = verify_tcrl(t, ctx.deployment().vendor_key().public_key(),
                            ctx.deployment().log_key().public_key(), require_inclusion);
      emit(ctx.globals, json{{"valid", ok},
                             {"version", t.version},
                             {"entries", t.entries.size()},
                             {"bytes", t.byte_size()},
                             {"included", t.inclusion.has_value()}});
      return ok ? 0 : 2;
    };
  });

  // scenario
  std::string scenario_name;
  bool scenario_quiet = false;
  auto* scenario = app.add_subcommand("scenario", "Scripted timelines on a virtual clock");
  scenario->require_subcommand(1);
  auto* s_run = scenario->add_subcommand("run", "Run a scenario file or built-in scenario");
  s_run->add_option("scenario", scenario_name, "File path or built-in name")->required();
  s_run->add_flag("-q,--quiet", scenario_quiet, "Print only the summary");
  s_run->callback([&] {
    action = [&](Context& ctx) {
      json script = fs::exists(scenario_name) ? read_json_file(scenario_name)
                                              : builtin_scenario(scenario_name);
      ScenarioReport r = run_scenario(script);
      json out = r.to_json();
      if (scenario_quiet) out.erase("trace");
      emit(ctx.globals, out);
      return r.all_passed() ? 0 : 2;
    };
  });
  auto* s_list = scenario->add_subcommand("list", "List built-in scenarios");
  s_list->callback([&] {
    action = [&](Context&) {
      for (const auto& n : builtin_scenario_names()) std::cout << n << "\n";
      return 0;
    };
  });
  auto* s_export = scenario->add_subcommand("export", "Print a built-in scenario script");
  s_export->add_option("name", scenario_name, "Built-in name")->required();
  s_export->callback([&] {
    action = [&](Context& ctx) {
      emit(ctx.globals, builtin_scenario(scenario_name));
      return 0;
    };
  });

  // bench
  BenchParams bp;
  auto* bench = app.add_subcommand("bench", "Measure registration, update and validation");
  bench->add_option("--chains", bp.chains, "Chains to register");
  bench->add_option("--validations", bp.validations, "Validations to time");
  bench->callback([&] {
    action = [&](Context& ctx) {
      emit(ctx.globals, run_bench(bp).to_json());
      return 0;
    };
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP log service");
  serve->callback([&] { action = [&](Context& ctx) { return run_serve(ctx); }; });

  CLI11_PARSE(app, argc, argv);
  try {
    Context ctx(g);
    return action(ctx);
  } catch (const Error& e) {
    std::cerr << "pkisn: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pkisn: " << e.what() << "\n";
    return 1;
  }
}
