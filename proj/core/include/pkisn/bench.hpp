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

#include "pkisn/wire.hpp"

namespace pkisn {

struct BenchParams {
  std::size_t chains = 10'000;
  std::size_t validations = 500;
};

struct BenchReport {
  std::size_t chains = 0;
  double registration_per_second = 0;
  double update_seconds = 0;
  double validation_ms_mean = 0;
  double pre_validate_ms_mean = 0;
  double proof_check_ms_mean = 0;

  json to_json() const;
};

/// In-process measurement on the host: submit `chains` fresh root/CA/leaf
/// chains, run the update that appends them, then time complete validation
/// of a sample. Issuance is not timed.
BenchReport run_bench(const BenchParams& params);

}  // namespace pkisn
