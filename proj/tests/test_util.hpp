// Copyright 2026 The ReachBot Planar Simulator Authors
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

#ifndef REACHBOT_TESTS_TEST_UTIL_HPP_
#define REACHBOT_TESTS_TEST_UTIL_HPP_

#include <string>

#ifndef REACHBOT_SOURCE_DIR
#define REACHBOT_SOURCE_DIR "."
#endif

namespace reachbot::testutil {

inline std::string scenario_path(const std::string& name) {
  return std::string(REACHBOT_SOURCE_DIR) + "/scenarios/" + name;
}

}  // namespace reachbot::testutil

#endif  // REACHBOT_TESTS_TEST_UTIL_HPP_
