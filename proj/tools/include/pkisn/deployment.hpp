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

#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include "pkisn/log.hpp"
#include "pkisn/wire.hpp"

namespace pkisn {

UnixTime wall_clock_now();

/// Operator configuration, read from a JSON file. Relative paths resolve
/// against the file's directory.
struct ServiceConfig {
  std::string listen_address = "127.0.0.1:8080";
  std::filesystem::path data_dir = "pkisn-data";
  UnixTime scheduling_period = kDefaultSchedulingPeriod;
  std::optional<std::filesystem::path> log_key_path;
  std::optional<std::filesystem::path> vendor_key_path;
  std::optional<std::filesystem::path> trust_roots_path;
  UnixTime max_root_age = 2 * kDefaultSchedulingPeriod;
  UnixTime prune_grace = kDefaultSchedulingPeriod;
  std::size_t max_pending = 1'000'000;

  static ServiceConfig from_json(const json& j, const std::filesystem::path& base);
  static ServiceConfig load(const std::filesystem::path& file);
  /// `explicit_path`, else $PKISN_CONFIG, else defaults.
  static ServiceConfig resolve(const std::optional<std::filesystem::path>& explicit_path);
  json to_json() const;
};

/// Files under data_dir: meta.json (start time and period), log_key.json,
/// vendor_key.json and trust_roots.json unless the config names other paths,
/// and journal.bin.
class Deployment {
 public:
  /// Creates missing keys and metadata; `now` fixes the start time of a new
  /// data directory. Throws Config on inconsistent or missing files.
  static Deployment prepare(const ServiceConfig& config, UnixTime now);

  const ServiceConfig& config() const { return config_; }
  const KeyPair& log_key() const { return log_key_; }
  const KeyPair& vendor_key() const { return vendor_key_; }
  const std::set<Digest>& trust_roots() const { return trust_roots_; }
  UnixTime start_time() const { return start_time_; }

  LogConfig log_config() const;
  Log open_log() const;

  std::filesystem::path trust_roots_file() const;
  /// Adds a root to the trust roots file.
  void add_trust_root(const Digest& cert_hash);

 private:
  Deployment(ServiceConfig config, KeyPair log_key, KeyPair vendor_key)
      : config_(std::move(config)), log_key_(std::move(log_key)), vendor_key_(std::move(vendor_key)) {}

  ServiceConfig config_;
  KeyPair log_key_;
  KeyPair vendor_key_;
  std::set<Digest> trust_roots_;
  UnixTime start_time_ = 0;
};

json read_json_file(const std::filesystem::path& file);
/// Writes via a temporary file and rename.
void write_json_file(const std::filesystem::path& file, const json& j);

}  // namespace pkisn
