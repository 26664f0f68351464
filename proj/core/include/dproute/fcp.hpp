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


#ifndef DPROUTE_FCP_HPP_
#define DPROUTE_FCP_HPP_

#include <optional>

#include "dproute/bitvec.hpp"
#include "dproute/header.hpp"
#include "dproute/hierarchy.hpp"
#include "dproute/pipeline.hpp"
#include "dproute/topology.hpp"

namespace dproute {

// Failure state a switch knows about: its own adjacent links, both
// directions of every failed link. Width matches the packet's fail vector.
struct LocalLinkState {
  SwitchId sw = 0;
  BitVec failed;
};

// Local view of switch s given the network-wide set of down links.
// `down` may be narrower than `width` (base vs extended id space).
LocalLinkState local_state(const Topology& t, SwitchId s, const BitVec& down, std::size_t width);

// fail |= local.failed. Throws WidthMismatch.
void ingress_fcp(PacketHeader& h, const LocalLinkState& local);

enum class RouteAction : std::uint8_t { kFollowPath, kRecompute, kDeliver, kDrop };
std::string_view to_string(RouteAction a) noexcept;

struct RouteDecision {
  RouteAction action = RouteAction::kRecompute;
  SwitchId next_hop = 0;  // FollowPath only; may be a virtual border switch
};

// Forwarding-table fields at switch s. With a layout, a virtual next hop is
// locally failed only when every physical link from s into that domain is.
MatchInput forwarding_input(const PacketHeader& h, SwitchId s, const LocalLinkState& local,
                            const Topology& rule_topo, const HierarchyLayout* layout);

// True when the chain is complete and s is the final destination.
bool at_final(const PacketHeader& h, SwitchId s) noexcept;

// Reference decision without tables: Deliver at the final destination,
// FollowPath when the next source-route hop is reachable over a locally up
// link, Recompute otherwise.
RouteDecision route_decision(const PacketHeader& h, SwitchId s, const LocalLinkState& local,
                             const Topology& rule_topo, const HierarchyLayout* layout = nullptr);

// First locally up physical neighbor that realizes hop s -> next. For a real
// neighbor that is `next` itself; for a virtual switch it is the lowest-id
// link into the neighbor domain.
std::optional<SwitchId> physical_next_hop(SwitchId s, SwitchId next, const LocalLinkState& local,
                                          const Topology& rule_topo,
                                          const HierarchyLayout* layout);

}  // namespace dproute

#endif  // DPROUTE_FCP_HPP_
