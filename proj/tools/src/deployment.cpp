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

#include "pkisn/deployment.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pkisn {

namespace fs = std::filesystem;

UnixTime wall_clock_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

json read_json_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_json_file(const fs::path& file, const json& j) {
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << j.dump(2) << "\n";
    if (!out.flush()) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
  }
  fs::rename(tmp, file);
}

namespace {

fs::path resolve_path(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

KeyPair load_or_create_key(const std::optional<fs::path>& configured, const fs::path& fallback,
                           KeyRole role) {
  if (configured) {
    if (!fs::exists(*configured)) {
      throw Error(ErrorCode::Config, "key file does not exist: " + configured->string());
    }
    KeyPair k = key_from_json(read_json_file(*configured));
    if (k.role() != role) {
      throw Error(ErrorCode::Config, configured->string() + " holds a " +
                                         std::string(to_string(k.role())) + " key");
    }
    return k;
  }
  if (fs::exists(fallback)) return key_from_json(read_json_file(fallback));
  KeyPair k = KeyPair::generate(role);
  write_json_file(fallback, key_to_json(k));
  fs::permissions(fallback, fs::perms::owner_read | fs::perms::owner_write,
                  fs::perm_options::replace);
  return k;
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const json& j, const fs::path& base) {
  ServiceConfig c;
  try {
    if (j.contains("listen_address")) c.listen_address = j.at("listen_address").get<std::string>();
    if (j.contains("data_dir")) c.data_dir = resolve_path(base, j.at("data_dir").get<std::string>());
    if (j.contains("scheduling_period")) c.scheduling_period = j.at("scheduling_period").get<UnixTime>();
    if (j.contains("log_key")) c.log_key_path = resolve_path(base, j.at("log_key").get<std::string>());
    if (j.contains("vendor_key")) {
      c.vendor_key_path = resolve_path(base, j.at("vendor_key").get<std::string>());
    }
    if (j.contains("trust_roots")) {
      c.trust_roots_path = resolve_path(base, j.at("trust_roots").get<std::string>());
    }
    if (j.contains("max_root_age")) c.max_root_age = j.at("max_root_age").get<UnixTime>();
    else c.max_root_age = 2 * c.scheduling_period;
    if (j.contains("prune_grace")) c.prune_grace = j.at("prune_grace").get<UnixTime>();
    else c.prune_grace = c.scheduling_period;
    if (j.contains("max_pending")) c.max_pending = j.at("max_pending").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  if (c.scheduling_period <= 0) throw Error(ErrorCode::Config, "scheduling_period must be > 0");
  if (c.max_root_age <= 0) throw Error(ErrorCode::Config, "max_root_age must be > 0");
  return c;
}

ServiceConfig ServiceConfig::load(const fs::path& file) {
  if (!fs::exists(file)) throw Error(ErrorCode::Config, "config file not found: " + file.string());
  return from_json(read_json_file(file), fs::absolute(file).parent_path());
}

ServiceConfig ServiceConfig::resolve(const std::optional<fs::path>& explicit_path) {
  if (explicit_path) return load(*explicit_path);
  if (const char* env = std::getenv("PKISN_CONFIG"); env && *env) return load(env);
  return ServiceConfig{};
}

json ServiceConfig::to_json() const {
  json j{{"listen_address", listen_address},
         {"data_dir", data_dir.string()},
         {"scheduling_period", scheduling_period},
         {"max_root_age", max_root_age},
         {"prune_grace", prune_grace},
         {"max_pending", max_pending}};
  if (log_key_path) j["log_key"] = log_key_path->string();
  if (vendor_key_path) j["vendor_key"] = vendor_key_path->string();
  if (trust_roots_path) j["trust_roots"] = trust_roots_path->string();
  return j;
}

Deployment Deployment::prepare(const ServiceConfig& config, UnixTime now) {
  std::error_code ec;
  fs::create_directories(config.data_dir, ec);
  if (ec) throw Error(ErrorCode::Config, "cannot create " + config.data_dir.string());

  Deployment d(config,
               load_or_create_key(config.log_key_path, config.data_dir / "log_key.json",
                                  KeyRole::LogKey),
               load_or_create_key(config.vendor_key_path, config.data_dir / "vendor_key.json",
                                  KeyRole::VendorKey));

  fs::path meta = config.data_dir / "meta.json";
  if (fs::exists(meta)) {
    json m = read_json_file(meta);
    try {
      d.start_time_ = m.at("start_time").get<UnixTime>();
      if (m.at("scheduling_period").get<UnixTime>() != config.scheduling_period) {
        throw Error(ErrorCode::Config, "scheduling_period differs from " + meta.string());
      }
      if (m.at("log_key_id").get<Digest>() != d.log_key_.key_id()) {
        throw Error(ErrorCode::Config, "log key differs from " + meta.string());
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Config, meta.string() + ": " + e.what());
    }
  } else {
    d.start_time_ = now;
    write_json_file(meta, json{{"start_time", now},
                               {"scheduling_period", config.scheduling_period},
                               {"log_key_id", d.log_key_.key_id()}});
  }

  fs::path roots = d.trust_roots_file();
  if (fs::exists(roots)) {
    try {
      for (const auto& h : read_json_file(roots)) d.trust_roots_.insert(h.get<Digest>());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::Config, roots.string() + ": " + e.what());
    }
  } else if (config.trust_roots_path) {
    throw Error(ErrorCode::Config, "trust roots file does not exist: " + roots.string());
  } else {
    write_json_file(roots, json::array());
  }
  return d;
}

LogConfig Deployment::log_config() const {
  LogConfig c;
  c.scheduling_period = config_.scheduling_period;
  c.start_time = start_time_;
  c.max_pending = config_.max_pending;
  c.trust_roots = trust_roots_;
  c.vendor_pub = vendor_key_.public_key();
  return c;
}

Log Deployment::open_log() const { return Log::open(config_.data_dir, log_config(), log_key_); }

fs::path Deployment::trust_roots_file() const {
  return config_.trust_roots_path ? *config_.trust_roots_path
                                  : config_.data_dir / "trust_roots.json";
}

void Deployment::add_trust_root(const Digest& cert_hash) {
  if (!trust_roots_.insert(cert_hash).second) return;
  json arr = json::array();
  for (const auto& h : trust_roots_) arr.push_back(h);
  write_json_file(trust_roots_file(), arr);
}

}  // namespace pkisn
