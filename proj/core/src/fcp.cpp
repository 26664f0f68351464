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


#include "dproute/fcp.hpp"

#include "dproute/errors.hpp"

namespace dproute {

LocalLinkState local_state(const Topology& t, SwitchId s, const BitVec& down, std::size_t width) {
  LocalLinkState st{s, BitVec(width)};
  const BitVec& in = t.edge_mask(s, Direction::kIncoming);
  const BitVec& out = t.edge_mask(s, Direction::kOutgoing);
  for (LinkId id : down.set_bits()) {
    if (id <= in.width() && (in.test(id) || out.test(id))) st.failed.set(id);
  }
  return st;
}

void ingress_fcp(PacketHeader& h, const LocalLinkState& local) {
  if (local.failed.width() != h.fail.width()) {
    throw WidthMismatch("local link state width " + std::to_string(local.failed.width()) +
                        " != header width " + std::to_string(h.fail.width()));
  }
  h.fail |= local.failed;
}

std::string_view to_string(RouteAction a) noexcept {
  switch (a) {
    case RouteAction::kFollowPath: return "follow_path";
    case RouteAction::kRecompute: return "recompute";
    case RouteAction::kDeliver: return "deliver";
    case RouteAction::kDrop: return "drop";
  }
  return "?";
}

bool at_final(const PacketHeader& h, SwitchId s) noexcept {
  return s == h.final_dst && h.policy.chain_complete();
}

std::optional<SwitchId> physical_next_hop(SwitchId s, SwitchId next, const LocalLinkState& local,
                                          const Topology& rule_topo,
                                          const HierarchyLayout* layout) {
  if (next == kSentinel) return std::nullopt;
  if (layout && layout->is_virtual(next)) {
    const VirtualLink* vl = layout->virtual_link(s, next);
    if (vl == nullptr) return std::nullopt;
    for (LinkId id : vl->physical) {
      if (!local.failed.test(id)) return layout->base().link(id).to;
    }
    return std::nullopt;
  }
  auto id = rule_topo.find_link(s, next);
  if (!id || local.failed.test(*id)) return std::nullopt;
  return next;
}

MatchInput forwarding_input(const PacketHeader& h, SwitchId s, const LocalLinkState& local,
                            const Topology& rule_topo, const HierarchyLayout* layout) {
  MatchInput in;
  SwitchId next = h.next_hop();
  in.scalar[static_cast<std::size_t>(Field::kCurr)] = s;
  in.scalar[static_cast<std::size_t>(Field::kAtFinal)] = at_final(h, s) ? 1 : 0;
  in.scalar[static_cast<std::size_t>(Field::kNextHop)] = next;
  bool failed = next != kSentinel && !physical_next_hop(s, next, local, rule_topo, layout);
  in.scalar[static_cast<std::size_t>(Field::kLocalFailed)] = failed ? 1 : 0;
  return in;
}

RouteDecision route_decision(const PacketHeader& h, SwitchId s, const LocalLinkState& local,
                             const Topology& rule_topo, const HierarchyLayout* layout) {
  if (at_final(h, s)) return {RouteAction::kDeliver, 0};
  if (h.path_exhausted()) return {RouteAction::kRecompute, 0};
  SwitchId next = h.next_hop();
  if (physical_next_hop(s, next, local, rule_topo, layout)) return {RouteAction::kFollowPath, next};
  return {RouteAction::kRecompute, 0};
}

}  // namespace dproute
