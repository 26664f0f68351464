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

#ifndef DPROUTE_HIERARCHY_HPP_
#define DPROUTE_HIERARCHY_HPP_

// Domain partitioning for hierarchical routing.
//
// All link ids live in one extended id space so that a single visited vector
// serves flat, intra-domain and domain-graph traversals:
//
//   [1, 2E]                      physical links of the base topology
//   [2E+1, 2E+2D]                domain-graph links, (d1 < d2) pairs in order
//   [2E+2D+1, width]             virtual border links b <-> v(d, e), ordered by
//                                (d, e, b)
//
// Domain ids start at max(128, next power of two above the largest switch
// id); virtual border switches are numbered after the last domain id.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dproute/bitvec.hpp"
#include "dproute/topology.hpp"
#include "dproute/types.hpp"

namespace dproute {

using DomainId = SwitchId;

struct DomainPartition {
  std::map<SwitchId, DomainId> domain_of;
  std::vector<DomainId> domain_ids;  // ascending
  // (domain, neighbor domain) -> virtual switch standing for the neighbor
  // inside `domain`'s augmented graph.
  std::map<std::pair<DomainId, DomainId>, SwitchId> virtual_switch;

  DomainId domain(SwitchId s) const;
  std::vector<SwitchId> members(DomainId d) const;
  bool has_domain(DomainId d) const;
  std::size_t size() const noexcept { return domain_ids.size(); }
};

// Validates `assignment` (every switch mapped to an id outside the switch id
// range) and derives the virtual switch table.
DomainPartition make_partition(const Topology& t, const std::map<SwitchId, DomainId>& assignment);

// Seeded random balanced assignment followed by a connectivity repair pass
// that moves switches stranded outside their domain's largest component into
// an adjacent domain. Throws PartitionInfeasible.
DomainPartition partition_domains(const Topology& t, std::size_t n_domains, std::uint64_t seed);

struct DomainGraph {
  Topology graph;  // switches are DomainIds, link ids in the extended space
  // domain link -> physical links realizing it (same direction)
  std::map<LinkId, BitVec> failmap;
};

DomainGraph build_domain_graph(const Topology& t, const DomainPartition& p);

// Intra-domain subgraph of d plus one virtual switch per neighbor domain,
// linked to every border switch of d that touches that neighbor.
Topology augment_domain_topology(const Topology& t, const DomainPartition& p, DomainId d);

// Width of the extended link id space for (t, p).
std::size_t extended_width(const Topology& t, const DomainPartition& p);

struct VirtualLink {
  LinkId id = 0;            // border -> virtual
  SwitchId border = 0;
  SwitchId vswitch = 0;
  DomainId domain = 0;      // domain of the border switch
  DomainId neighbor = 0;    // domain the virtual switch stands for
  std::vector<LinkId> physical;  // border -> neighbor-domain links, ascending
};

// Rule that sets `target` in a derived failure vector when every bit of
// `required` is set in the packet's failure vector.
struct FailMapEntry {
  LinkId target = 0;
  BitVec required;
};

// Everything the rule compiler and simulator need about one partition.
class HierarchyLayout {
 public:
  HierarchyLayout(const Topology& base, DomainPartition partition);

  const Topology& base() const noexcept { return base_; }
  const DomainPartition& partition() const noexcept { return partition_; }
  const DomainGraph& domain_graph() const noexcept { return domain_graph_; }
  const Topology& augmented(DomainId d) const;
  // Union of base, domain graph and virtual links; the rule topology.
  const Topology& rule_topology() const noexcept { return union_; }
  std::size_t width() const noexcept { return union_.width(); }

  bool is_virtual(SwitchId s) const noexcept;
  bool is_domain(SwitchId s) const noexcept;
  SwitchId virtual_switch(DomainId d, DomainId neighbor) const;
  // (domain, neighbor) of a virtual switch.
  std::pair<DomainId, DomainId> virtual_target(SwitchId v) const;
  std::span<const VirtualLink> virtual_links() const noexcept { return vlinks_; }
  const VirtualLink* virtual_link(SwitchId border, SwitchId vswitch) const;

  // Bits preset in visited vectors for each traversal scope.
  const BitVec& flat_scope_mask() const noexcept { return flat_mask_; }
  const BitVec& domain_scope_mask(DomainId d) const;
  const BitVec& domain_graph_scope_mask() const noexcept { return graph_mask_; }

  std::span<const FailMapEntry> failmap_rules() const noexcept { return failmap_rules_; }
  // fail | every derived domain/virtual link whose physical links all failed.
  BitVec map_failures(const BitVec& fail) const;

  // Lift a base-width vector into the extended width (same low bits).
  BitVec widen(const BitVec& v) const;

 private:
  Topology base_;
  DomainPartition partition_;
  DomainGraph domain_graph_;
  std::map<DomainId, Topology> augmented_;
  Topology union_;
  std::vector<VirtualLink> vlinks_;
  std::map<SwitchId, std::pair<DomainId, DomainId>> vtarget_;
  BitVec flat_mask_;
  BitVec graph_mask_;
  std::map<DomainId, BitVec> domain_masks_;
  std::vector<FailMapEntry> failmap_rules_;
};

}  // namespace dproute

#endif  // DPROUTE_HIERARCHY_HPP_
