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

#include "dproute/ruleplane.hpp"

#include "dproute/errors.hpp"
#include "dproute/header.hpp"

namespace dproute {

namespace {

std::uint64_t hier_of(const DomainNodes& nodes, SwitchId s) { return nodes.contains(s) ? 1 : 0; }

ActionSpec action(ActionKind kind, SwitchId n = 0, BitVec mask = {}) {
  ActionSpec a;
  a.kind = kind;
  a.n = n;
  a.mask = std::move(mask);
  return a;
}

TableRule rule(std::vector<MatchKey> keys, ActionSpec act, BitVec vec_value = {},
               BitVec vec_mask = {}) {
  TableRule r;
  r.keys = std::move(keys);
  r.action = std::move(act);
  r.vec_value = std::move(vec_value);
  r.vec_mask = std::move(vec_mask);
  return r;
}

std::uint64_t len_key(int len) { return static_cast<std::uint16_t>(static_cast<std::int16_t>(len)); }

}  // namespace

Table gen_bfs_rules(const Topology& t, const DomainNodes& domain_nodes) {
  const std::size_t w = t.width();
  Table table("bfs", bfs_schema(w), action(ActionKind::kUnreachable));
  const BitVec zero(w);
  for (const auto& l : t.links()) {
    BitVec bit(w);
    bit.set(l.id);
    const BitVec& n_visited = t.edge_mask(l.to, Direction::kIncoming);
    for (std::uint64_t s = 0; s < 2; ++s) {
      table.add(rule({MatchKey::exact(hier_of(domain_nodes, l.from)), MatchKey::exact(l.from),
                      MatchKey::exact(s), MatchKey::any()},
                     action(ActionKind::kPushNeighbor, l.to, n_visited), zero, bit));
    }
  }
  for (SwitchId m : t.switches()) {
    const BitVec& out = t.edge_mask(m, Direction::kOutgoing);
    for (std::uint64_t s = 0; s < 2; ++s) {
      table.add(rule({MatchKey::exact(hier_of(domain_nodes, m)), MatchKey::exact(m),
                      MatchKey::exact(s), MatchKey::any()},
                     action(ActionKind::kPopStack), out, out));
    }
  }
  std::vector<std::uint64_t> levels{0};
  if (!domain_nodes.empty()) levels.push_back(1);
  for (std::uint64_t h : levels) {
    for (std::uint64_t s = 0; s < 2; ++s) {
      table.add(rule({MatchKey::exact(h), MatchKey::exact(kSentinel), MatchKey::exact(s),
                      MatchKey::ternary(1, 1)},
                     action(ActionKind::kChangeStack), zero, zero));
    }
  }
  return table;
}

Table gen_iddfs_rules(const Topology& t, std::uint16_t max_len_cap, bool preference_rules,
                      const DomainNodes& domain_nodes) {
  if (max_len_cap < kInitialMaxLen || (max_len_cap & (max_len_cap - 1)) != 0) {
    throw InvalidRule("max_len cap must be a power of two >= 4");
  }
  const std::size_t w = t.width();
  Table table("iddfs", iddfs_schema(w), action(ActionKind::kBacktrack));
  const BitVec zero(w);
  for (std::uint32_t max_len = kInitialMaxLen; max_len <= max_len_cap; max_len <<= 1) {
    for (std::uint32_t len = 0; len < max_len; ++len) {
      for (SwitchId m : t.switches()) {
        auto out = t.out_links(m);
        for (std::size_t i = 0; i < out.size(); ++i) {
          const auto& l = out[i];
          BitVec bit(w);
          bit.set(l.id);
          const BitVec& n_visited = t.edge_mask(l.to, Direction::kIncoming);
          std::vector<MatchKey> base{MatchKey::exact(hier_of(domain_nodes, m)), MatchKey::exact(m),
                                     MatchKey::exact(len), MatchKey::exact(max_len)};
          auto keys = base;
          keys.push_back(MatchKey::lpm(0, 0));
          table.add(rule(std::move(keys), action(ActionKind::kGotoNeighbor, l.to, n_visited), zero,
                         bit));
          if (preference_rules && i >= 1 && i < kMaxPrefHops) {
            auto [value, prefix] = pref_pattern(i);
            keys = base;
            keys.push_back(MatchKey::lpm(value, prefix));
            table.add(rule(std::move(keys), action(ActionKind::kGotoNeighbor, l.to, n_visited),
                           zero, bit));
          }
        }
      }
    }
  }
  std::vector<std::uint64_t> levels{0};
  if (!domain_nodes.empty()) levels.push_back(1);
  for (std::uint64_t h : levels) {
    for (std::uint32_t max_len = kInitialMaxLen; max_len <= max_len_cap; max_len <<= 1) {
      table.add(rule({MatchKey::exact(h), MatchKey::exact(kSentinel), MatchKey::exact(len_key(-1)),
                      MatchKey::exact(max_len), MatchKey::lpm(0, 0)},
                     action(ActionKind::kIncreaseLength), zero, zero));
    }
  }
  return table;
}

Table gen_forwarding_rules(const Topology& t, SwitchId s) {
  Table table("forwarding", forwarding_schema(), action(ActionKind::kDivert));
  table.add(rule({MatchKey::exact(s), MatchKey::ternary(1, 1), MatchKey::any(), MatchKey::any()},
                 action(ActionKind::kDeliver)));
  for (const auto& l : t.out_links(s)) {
    table.add(rule({MatchKey::exact(s), MatchKey::any(), MatchKey::ternary(l.to, 0xffff),
                    MatchKey::ternary(0, 1)},
                   action(ActionKind::kForward, l.to)));
  }
  return table;
}

Table gen_hierarchy_rules(const HierarchyLayout& layout, SwitchId s) {
  const auto& part = layout.partition();
  DomainId d = part.domain(s);
  const BitVec& flat = layout.flat_scope_mask();
  const BitVec& intra = layout.domain_scope_mask(d);
  Table table("hierarchy", hierarchy_schema(), action(ActionKind::kFlatRoute, 0, flat));
  // Destination in this domain: route on the domain's own links. The
  // fallback widens to the full topology if the domain is split.
  table.add(rule({MatchKey::exact(d), MatchKey::any(), MatchKey::any()},
                 action(ActionKind::kDomainEnter, 0, intra)));
  std::vector<DomainId> neighbors;
  for (const auto& l : layout.domain_graph().graph.out_links(d)) neighbors.push_back(l.to);
  for (DomainId e : part.domain_ids) {
    if (e == d) continue;
    for (DomainId f : neighbors) {
      table.add(rule({MatchKey::exact(e), MatchKey::ternary(1, 1), MatchKey::ternary(f, 0xffff)},
                     action(ActionKind::kDomainEnter, layout.virtual_switch(d, f), intra)));
    }
    ActionSpec reroute = action(ActionKind::kDomainReroute, d, layout.domain_graph_scope_mask());
    reroute.m = e;
    table.add(rule({MatchKey::exact(e), MatchKey::any(), MatchKey::any()}, std::move(reroute)));
  }
  return table;
}

WcmpShape wcmp_shape(const Topology& t, const WcmpEntry& entry) {
  WcmpShape shape;
  shape.weights = entry.weights;
  for (SwitchId h : entry.next_hops) {
    shape.prefs.push_back(pref_for_index(neighbor_index(t, entry.sw, h)));
  }
  return shape;
}

Table gen_wcmp_pre_rules(const WcmpShape& shape) {
  if (shape.weights.empty() || shape.weights.size() > kMaxPrefHops ||
      shape.prefs.size() != shape.weights.size()) {
    throw InvalidPolicy("WCMP shape needs 1 to 4 weights with one pref each");
  }
  std::uint64_t total = 0;
  for (auto w : shape.weights) total += w;
  if (total == 0) throw ZeroWeightSum("WCMP weights sum to zero");
  Table table("wcmp_pre", wcmp_schema(), action(ActionKind::kNoop));
  const std::uint32_t masks = 1U << shape.weights.size();
  for (std::uint32_t active = 1; active < masks; ++active) {
    std::uint64_t active_total = 0;
    for (std::size_t i = 0; i < shape.weights.size(); ++i) {
      if (active & (1U << i)) active_total += shape.weights[i];
    }
    if (active_total == 0) continue;  // every active hop has weight 0: no preference
    for (const auto& range : wcmp_ranges(shape.weights, shape.prefs, active)) {
      for (auto [value, mask] : range_to_ternary(range.lo, range.hi, kHashBits)) {
        ActionSpec a = action(ActionKind::kWcmpMap);
        a.value = range.pref;
        table.add(rule({MatchKey::exact(active), MatchKey::ternary(value, mask)}, std::move(a)));
      }
    }
  }
  return table;
}

RuleSet compile_rules(const Topology& t, const HierarchyLayout* layout, RuleGenOptions options) {
  RuleSet rs;
  const Topology& rt = layout ? layout->rule_topology() : t;
  DomainNodes nodes;
  if (layout) nodes.insert(layout->partition().domain_ids.begin(),
                           layout->partition().domain_ids.end());
  rs.hierarchical = layout != nullptr;
  rs.fingerprint = rt.fingerprint();
  rs.width = rt.width();
  rs.max_len_cap = options.max_len_cap ? options.max_len_cap : max_len_cap_for(rt.switch_count());
  rs.bfs = std::make_shared<const Table>(gen_bfs_rules(rt, nodes));
  rs.iddfs = std::make_shared<const Table>(
      gen_iddfs_rules(rt, rs.max_len_cap, options.preference_rules, nodes));
  for (SwitchId s : t.switches()) {
    SwitchRules sr{rs.bfs, rs.iddfs, gen_forwarding_rules(rt, s), std::nullopt};
    if (layout) sr.hierarchy = gen_hierarchy_rules(*layout, s);
    rs.switches.emplace(s, std::move(sr));
  }
  return rs;
}

}  // namespace dproute
