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

#ifndef DPROUTE_RULEPLANE_HPP_
#define DPROUTE_RULEPLANE_HPP_

// Rule compiler: turns a topology (and optional domain layout) into the
// match-action tables every switch installs.

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "dproute/hierarchy.hpp"
#include "dproute/pipeline.hpp"
#include "dproute/topology.hpp"

namespace dproute {

// Switches whose traversal rules carry hierarchy = 1 (domain-graph nodes).
using DomainNodes = std::set<SwitchId>;

// Per directed edge m->n (id k): two push_neighbor rules (stack 0 and 1)
// matching curr = m and visited bit k = 0. Per switch: two pop_stack rules
// matching every outgoing bit set. Plus change_stack on curr = 0 when the
// inactive stack is live; the default action reports the search exhausted.
Table gen_bfs_rules(const Topology& t, const DomainNodes& domain_nodes = {});

// Per directed edge and every (len, max_len) with len < max_len <= cap: a
// goto_neighbor rule. When `preference_rules` is set, neighbors 1..3 of a
// switch also get an lpm pref rule (see pref_pattern). increase_length
// rules match curr = 0, len = -1 for each max_len. Default: backtrack.
Table gen_iddfs_rules(const Topology& t, std::uint16_t max_len_cap,
                      bool preference_rules = true, const DomainNodes& domain_nodes = {});

// Forwarding table of switch s: deliver when the packet is at its final
// destination; forward(n) when the source route's next hop is neighbor n and
// the local link is up; default divert to the traversal.
Table gen_forwarding_rules(const Topology& t, SwitchId s);

// Hierarchy-selection table of physical switch s, keyed on (destination
// domain, domain path valid, next domain on the path):
//   own domain            -> domain_enter(final) within the domain
//   other, valid, next f  -> domain_enter(virtual switch toward f)
//   other                 -> domain_reroute over the domain graph
// The default is a flat route over the whole topology.
Table gen_hierarchy_rules(const HierarchyLayout& layout, SwitchId s);

// Weight vector plus the pref value that steers traversal to each hop.
struct WcmpShape {
  std::vector<std::uint32_t> weights;
  std::vector<std::uint8_t> prefs;

  auto operator<=>(const WcmpShape&) const = default;
};

WcmpShape wcmp_shape(const Topology& t, const WcmpEntry& entry);

// Maps (active next-hop mask, flow hash) to a pref value: for each active
// mask, the hash space is split proportionally to the active weights and
// each interval is expanded into ternary patterns. Throws ZeroWeightSum.
Table gen_wcmp_pre_rules(const WcmpShape& shape);

struct RuleGenOptions {
  bool preference_rules = true;
  std::uint16_t max_len_cap = 0;  // 0: derive from the switch count
};

struct SwitchRules {
  std::shared_ptr<const Table> bfs;
  std::shared_ptr<const Table> iddfs;
  Table forwarding;
  std::optional<Table> hierarchy;
};

// Complete rule set. Traversal tables are identical on every switch and are
// shared; forwarding and hierarchy tables are per switch.
struct RuleSet {
  std::shared_ptr<const Table> bfs;
  std::shared_ptr<const Table> iddfs;
  std::map<SwitchId, SwitchRules> switches;
  std::uint32_t fingerprint = 0;  // rule topology fingerprint
  std::size_t width = 0;
  std::uint16_t max_len_cap = 0;
  bool hierarchical = false;
};

// Flat rules over `t` or, with a layout, hierarchy-aware rules over the
// layout's rule topology.
RuleSet compile_rules(const Topology& t, const HierarchyLayout* layout = nullptr,
                      RuleGenOptions options = {});

}  // namespace dproute

#endif  // DPROUTE_RULEPLANE_HPP_
