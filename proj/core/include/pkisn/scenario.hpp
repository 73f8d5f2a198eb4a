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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pkisn/wire.hpp"

namespace pkisn {

/// Scripted timeline replayed against a virtual clock. A script is
///   {"name", "scheduling_period", "start_time", "events": [...]}
/// where each event is an object with an "op" field. Time fields accept
/// integers or expressions such as "$t_att+3d" or "now-1h".
struct ScenarioExpectation {
  std::size_t event = 0;
  std::string description;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string name;
  std::vector<ScenarioExpectation> expectations;
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, double> metrics;
  std::vector<std::string> trace;

  bool all_passed() const;
  json to_json() const;
};

/// Throws ErrorCode::Script, naming the failing event index.
ScenarioReport run_scenario(const json& script);

std::vector<std::string> builtin_scenario_names();
/// Throws ErrorCode::Script for an unknown name.
json builtin_scenario(std::string_view name);

}  // namespace pkisn
