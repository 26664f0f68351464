/* Copyright 2026 The dproute Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef DPROUTE_TESTS_FIXTURES_HPP_
#define DPROUTE_TESTS_FIXTURES_HPP_

#include <string>

#include "dproute/topology.hpp"

namespace dproute::testing {

inline std::string data_path(const std::string& rel) {
  return std::string(DPROUTE_DATA_DIR) + "/" + rel;
}

inline Topology load_data(const std::string& name) {
  return load_topology(data_path("topologies/" + name));
}

// 1-2, 2-4, 1-3, 3-4: links 1/2 = 1<->2, 3/4 = 2<->4, 5/6 = 1<->3, 7/8 = 3<->4.
inline Topology diamond() { return load_data("diamond.json"); }

// 1 fans out to 2, 3, 4, which all reach 5.
inline Topology fan3() { return load_data("fan3.json"); }

// Two triangles-ish halves {1,2,3} and {4,5,6} bridged by 2-4 and 3-5.
inline Topology two_domain() { return load_data("two_domain.json"); }

}  // namespace dproute::testing

#endif  // DPROUTE_TESTS_FIXTURES_HPP_
