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

namespace pkisn::testing::golden {

// Presence-proof fixture for the chain a -> d -> m, frozen on the first run
// that passed every structural check.
inline constexpr const char* kLeafA = "1013810dc68b24614594e43b733784ec67a69a6234eb44a6ac4dc1694034cf30";
inline constexpr const char* kLeafD = "a76f9db88760b32472b1b994a4f820f5c9a8b45ec96bb62ef8edc7cffa126007";
inline constexpr const char* kLeafM = "d4a81f131bf3f8a9d57ae6977465f0c2c50981568b77fd77e37d03ca2b7ffd1c";
inline constexpr const char* kRevRoot = "1accc5895c87c74362ead39158c753ab975f2ce042c2b52dd532f8450942b2a7";
inline constexpr const char* kTimeRoot = "c95c2ee0d40260438b70358f0a488a80e728bccd9c74070c067151bb773517bc";

}  // namespace pkisn::testing::golden
