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


#ifndef DPROUTE_ORACLE_HPP_
#define DPROUTE_ORACLE_HPP_

// Reference path computations on plain adjacency lists. Nothing here touches
// headers, tables or the pipeline.

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "dproute/bitvec.hpp"
#include "dproute/policy.hpp"
#include "dproute/topology.hpp"

namespace dproute {

// Failed bidirectional links as (lower, higher) endpoint pairs.
using FailedLinks = std::set<Edge>;

FailedLinks failed_links_from_bits(const Topology& t, const BitVec& fail);

struct OracleResult {
  bool reachable = false;
  std::optional<std::size_t> shortest_len;       // hops
  std::optional<std::vector<SwitchId>> a_shortest_path;  // src ... dst
};

// Queue-based BFS on t minus `failed`.
OracleResult shortest_active_path(const Topology& t, const FailedLinks& failed, SwitchId src,
                                  SwitchId dst);

// Shortest concatenation src -> m1 -> ... -> dst over every choice of one
// replica per set.
OracleResult compliant_shortest_path(const Topology& t, const FailedLinks& failed, SwitchId src,
                                     SwitchId dst, const std::vector<ReplicaSet>& chain);

// Connected components of t minus `failed`: component index per switch.
std::vector<int> active_components(const Topology& t, const FailedLinks& failed);

// hops / shortest_len; nullopt when the packet was dropped or the pair is
// unreachable. A zero-length oracle path has stretch 1 when zero hops were
// taken.
std::optional<double> stretch(std::size_t hops, const OracleResult& oracle, bool delivered);

}  // namespace dproute

#endif  // DPROUTE_ORACLE_HPP_
