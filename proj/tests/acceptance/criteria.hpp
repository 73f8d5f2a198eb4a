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

#include <cstddef>
#include <string>

namespace pkisn::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

/// Counts checks and keeps the first few failure descriptions.
class Checker {
 public:
  bool expect(bool ok, const std::string& what);
  void note(std::string text) { note_ = std::move(text); }
  std::size_t failures() const { return failures_; }
  Outcome outcome() const;

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
  std::string note_;
};

Outcome backward_availability();
Outcome too_big_to_revoke();
Outcome presence_fixture();
Outcome merkle_equivalence();
Outcome rev_tree_completeness();
Outcome validator_equivalence();
Outcome light_monitor_soundness();
Outcome tcrl_equivalence();
Outcome performance_sanity();
Outcome crash_durability();

}  // namespace pkisn::acceptance
