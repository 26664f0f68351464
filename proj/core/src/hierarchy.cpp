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

#include "dproute/hierarchy.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>

#include "dproute/errors.hpp"
#include "dproute/rng.hpp"

namespace dproute {

namespace {

DomainId domain_base(const Topology& t) {
  auto above = std::bit_ceil(static_cast<std::uint32_t>(t.max_switch_id()) + 1);
  return static_cast<DomainId>(std::max<std::uint32_t>(128, above));
}

// Connected components of the subgraph induced by `members`.
std::vector<std::vector<SwitchId>> components(const Topology& t,
                                              const std::vector<SwitchId>& members) {
  std::set<SwitchId> in(members.begin(), members.end());
  std::set<SwitchId> seen;
  std::vector<std::vector<SwitchId>> out;
  for (SwitchId s : members) {
    if (seen.contains(s)) continue;
    std::vector<SwitchId> comp;
    std::deque<SwitchId> q{s};
    seen.insert(s);
    while (!q.empty()) {
      SwitchId u = q.front();
      q.pop_front();
      comp.push_back(u);
      for (const auto& l : t.out_links(u)) {
        if (in.contains(l.to) && seen.insert(l.to).second) q.push_back(l.to);
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

// Largest component; ties go to the one holding the smallest switch id.
const std::vector<SwitchId>& core_of(const std::vector<std::vector<SwitchId>>& comps) {
  const std::vector<SwitchId>* best = &comps.front();
  for (const auto& c : comps) {
    if (c.size() > best->size() || (c.size() == best->size() && c.front() < best->front())) {
      best = &c;
    }
  }
  return *best;
}

std::set<std::pair<DomainId, DomainId>> domain_adjacency(const Topology& t,
                                                         const DomainPartition& p) {
  std::set<std::pair<DomainId, DomainId>> adj;
  for (const auto& l : t.links()) {
    DomainId a = p.domain(l.from);
    DomainId b = p.domain(l.to);
    if (a != b) adj.emplace(a, b);
  }
  return adj;
}

// Domain-graph edges (d1 < d2) in id order.
std::vector<std::pair<DomainId, DomainId>> domain_edges(const Topology& t,
                                                        const DomainPartition& p) {
  std::vector<std::pair<DomainId, DomainId>> out;
  for (auto [a, b] : domain_adjacency(t, p)) {
    if (a < b) out.emplace_back(a, b);
  }
  return out;
}

std::vector<SwitchId> border_switches(const Topology& t, const DomainPartition& p,
                                      DomainId d, DomainId e) {
  std::set<SwitchId> out;
  for (const auto& l : t.links()) {
    if (p.domain(l.from) == d && p.domain(l.to) == e) out.insert(l.from);
  }
  return {out.begin(), out.end()};
}

struct VirtualPlan {
  std::vector<VirtualLink> links;
  std::size_t width = 0;
};

VirtualPlan plan_virtual_links(const Topology& t, const DomainPartition& p) {
  VirtualPlan plan;
  LinkId next = static_cast<LinkId>(t.width() + 2 * domain_edges(t, p).size() + 1);
  for (const auto& [key, v] : p.virtual_switch) {
    auto [d, e] = key;
    for (SwitchId b : border_switches(t, p, d, e)) {
      VirtualLink vl;
      vl.id = next;
      vl.border = b;
      vl.vswitch = v;
      vl.domain = d;
      vl.neighbor = e;
      for (const auto& l : t.out_links(b)) {
        if (p.domain(l.to) == e) vl.physical.push_back(l.id);
      }
      plan.links.push_back(std::move(vl));
      next += 2;
    }
  }
  plan.width = next - 1;
  return plan;
}

}  // namespace

DomainId DomainPartition::domain(SwitchId s) const {
  auto it = domain_of.find(s);
  if (it == domain_of.end()) throw UnknownSwitch("switch " + std::to_string(s) + " has no domain");
  return it->second;
}

std::vector<SwitchId> DomainPartition::members(DomainId d) const {
  if (!has_domain(d)) throw UnknownDomain("unknown domain " + std::to_string(d));
  std::vector<SwitchId> out;
  for (auto [s, dom] : domain_of) {
    if (dom == d) out.push_back(s);
  }
  return out;
}

bool DomainPartition::has_domain(DomainId d) const {
  return std::binary_search(domain_ids.begin(), domain_ids.end(), d);
}

DomainPartition make_partition(const Topology& t, const std::map<SwitchId, DomainId>& assignment) {
  DomainPartition p;
  std::set<DomainId> ids;
  for (SwitchId s : t.switches()) {
    auto it = assignment.find(s);
    if (it == assignment.end()) {
      throw PartitionInfeasible("switch " + std::to_string(s) + " is not assigned a domain");
    }
    if (it->second == kSentinel || t.has_switch(it->second)) {
      throw PartitionInfeasible("domain id " + std::to_string(it->second) +
                                " collides with the switch id range");
    }
    p.domain_of.emplace(s, it->second);
    ids.insert(it->second);
  }
  if (assignment.size() != t.switch_count()) {
    throw PartitionInfeasible("assignment names switches outside the topology");
  }
  p.domain_ids.assign(ids.begin(), ids.end());

  std::uint32_t next = static_cast<std::uint32_t>(p.domain_ids.back()) + 1;
  for (auto key : domain_adjacency(t, p)) {
    if (next > 0xffff) throw PartitionInfeasible("virtual switch ids exhausted");
    p.virtual_switch.emplace(key, static_cast<SwitchId>(next++));
  }
  return p;
}

DomainPartition partition_domains(const Topology& t, std::size_t n_domains, std::uint64_t seed) {
  if (n_domains < 1 || n_domains > t.switch_count()) {
    throw PartitionInfeasible("cannot split " + std::to_string(t.switch_count()) +
                              " switches into " + std::to_string(n_domains) + " domains");
  }
  DomainId base = domain_base(t);
  if (static_cast<std::size_t>(base) + n_domains > 0xffff) {
    throw PartitionInfeasible("domain ids exhausted");
  }
  std::vector<SwitchId> order(t.switches().begin(), t.switches().end());
  Rng rng(seed);
  rng.shuffle(order);
  std::map<SwitchId, DomainId> assign;
  for (std::size_t i = 0; i < order.size(); ++i) {
    assign[order[i]] = static_cast<DomainId>(base + i % n_domains);
  }

  // Repair: move one stray at a time into an adjacent domain core until every
  // domain is connected. Each move grows the union of cores, so this ends.
  for (;;) {
    std::map<DomainId, std::vector<SwitchId>> members;
    for (auto [s, d] : assign) members[d].push_back(s);
    std::map<SwitchId, DomainId> core_member;  // switch -> domain whose core holds it
    std::vector<SwitchId> strays;
    for (auto& [d, m] : members) {
      auto comps = components(t, m);
      const auto& core = core_of(comps);
      for (SwitchId s : core) core_member[s] = d;
      for (SwitchId s : m) {
        if (!std::binary_search(core.begin(), core.end(), s)) strays.push_back(s);
      }
    }
    if (strays.empty()) break;
    std::sort(strays.begin(), strays.end());
    bool moved = false;
    for (SwitchId s : strays) {
      std::optional<DomainId> target;
      for (const auto& l : t.out_links(s)) {
        auto it = core_member.find(l.to);
        if (it == core_member.end() || it->second == assign[s]) continue;
        DomainId cand = it->second;
        if (!target || members[cand].size() < members[*target].size() ||
            (members[cand].size() == members[*target].size() && cand < *target)) {
          target = cand;
        }
      }
      if (target) {
        assign[s] = *target;
        moved = true;
        break;
      }
    }
    if (!moved) throw PartitionInfeasible("partition repair made no progress");
  }
  return make_partition(t, assign);
}

std::size_t extended_width(const Topology& t, const DomainPartition& p) {
  return plan_virtual_links(t, p).width;
}

DomainGraph build_domain_graph(const Topology& t, const DomainPartition& p) {
  auto edges = domain_edges(t, p);
  std::size_t width = extended_width(t, p);
  std::vector<DirectedLink> links;
  std::map<LinkId, BitVec> failmap;
  LinkId id = static_cast<LinkId>(t.width() + 1);
  for (auto [a, b] : edges) {
    links.push_back({id, a, b});
    links.push_back({id + 1, b, a});
    BitVec fwd(width);
    BitVec rev(width);
    for (const auto& l : t.links()) {
      if (p.domain(l.from) == a && p.domain(l.to) == b) fwd.set(l.id);
      if (p.domain(l.from) == b && p.domain(l.to) == a) rev.set(l.id);
    }
    failmap.emplace(id, std::move(fwd));
    failmap.emplace(id + 1, std::move(rev));
    id += 2;
  }
  Topology g(t.name() + "-domains", p.domain_ids, std::move(links), width);
  return DomainGraph{std::move(g), std::move(failmap)};
}

Topology augment_domain_topology(const Topology& t, const DomainPartition& p, DomainId d) {
  if (!p.has_domain(d)) throw UnknownDomain("unknown domain " + std::to_string(d));
  auto plan = plan_virtual_links(t, p);
  std::vector<SwitchId> switches = p.members(d);
  std::vector<DirectedLink> links;
  for (const auto& l : t.links()) {
    if (p.domain(l.from) == d && p.domain(l.to) == d) links.push_back(l);
  }
  for (const auto& [key, v] : p.virtual_switch) {
    if (key.first == d) switches.push_back(v);
  }
  for (const auto& vl : plan.links) {
    if (vl.domain != d) continue;
    links.push_back({vl.id, vl.border, vl.vswitch});
    links.push_back({vl.id + 1, vl.vswitch, vl.border});
  }
  return Topology(t.name() + "-d" + std::to_string(d), std::move(switches), std::move(links),
                  plan.width);
}

HierarchyLayout::HierarchyLayout(const Topology& base, DomainPartition partition)
    : base_(base), partition_(std::move(partition)) {
  domain_graph_ = build_domain_graph(base_, partition_);
  auto plan = plan_virtual_links(base_, partition_);
  vlinks_ = std::move(plan.links);
  std::size_t width = plan.width;

  std::vector<SwitchId> switches(base_.switches().begin(), base_.switches().end());
  std::vector<DirectedLink> links(base_.links().begin(), base_.links().end());
  for (DomainId d : partition_.domain_ids) switches.push_back(d);
  for (const auto& l : domain_graph_.graph.links()) links.push_back(l);
  for (const auto& [key, v] : partition_.virtual_switch) {
    switches.push_back(v);
    vtarget_.emplace(v, key);
  }
  for (const auto& vl : vlinks_) {
    links.push_back({vl.id, vl.border, vl.vswitch});
    links.push_back({vl.id + 1, vl.vswitch, vl.border});
  }
  union_ = Topology(base_.name(), std::move(switches), std::move(links), width);
  union_.set_labels(base_.labels());

  for (DomainId d : partition_.domain_ids) {
    augmented_.emplace(d, augment_domain_topology(base_, partition_, d));
  }

  flat_mask_ = BitVec(width);
  graph_mask_ = BitVec(width);
  for (LinkId id = 1; id <= width; ++id) {
    if (id > base_.width()) flat_mask_.set(id);
    if (!domain_graph_.graph.has_link(id)) graph_mask_.set(id);
  }
  for (DomainId d : partition_.domain_ids) {
    BitVec m = ~BitVec(width);
    for (const auto& l : base_.links()) {
      if (partition_.domain(l.from) == d && partition_.domain(l.to) == d) m.reset(l.id);
    }
    for (const auto& vl : vlinks_) {
      if (vl.domain == d) m.reset(vl.id);
    }
    domain_masks_.emplace(d, std::move(m));
  }

  for (const auto& [id, phys] : domain_graph_.failmap) {
    failmap_rules_.push_back({id, phys});
  }
  for (const auto& vl : vlinks_) {
    BitVec req(width);
    for (LinkId p : vl.physical) req.set(p);
    failmap_rules_.push_back({vl.id, req});
  }
}

const Topology& HierarchyLayout::augmented(DomainId d) const {
  auto it = augmented_.find(d);
  if (it == augmented_.end()) throw UnknownDomain("unknown domain " + std::to_string(d));
  return it->second;
}

bool HierarchyLayout::is_virtual(SwitchId s) const noexcept { return vtarget_.contains(s); }

bool HierarchyLayout::is_domain(SwitchId s) const noexcept { return partition_.has_domain(s); }

SwitchId HierarchyLayout::virtual_switch(DomainId d, DomainId neighbor) const {
  auto it = partition_.virtual_switch.find({d, neighbor});
  if (it == partition_.virtual_switch.end()) {
    throw UnknownDomain("domains " + std::to_string(d) + " and " + std::to_string(neighbor) +
                        " are not adjacent");
  }
  return it->second;
}

std::pair<DomainId, DomainId> HierarchyLayout::virtual_target(SwitchId v) const {
  auto it = vtarget_.find(v);
  if (it == vtarget_.end()) throw UnknownSwitch("switch " + std::to_string(v) + " is not virtual");
  return it->second;
}

const VirtualLink* HierarchyLayout::virtual_link(SwitchId border, SwitchId vswitch) const {
  for (const auto& vl : vlinks_) {
    if (vl.border == border && vl.vswitch == vswitch) return &vl;
  }
  return nullptr;
}

const BitVec& HierarchyLayout::domain_scope_mask(DomainId d) const {
  auto it = domain_masks_.find(d);
  if (it == domain_masks_.end()) throw UnknownDomain("unknown domain " + std::to_string(d));
  return it->second;
}

BitVec HierarchyLayout::map_failures(const BitVec& fail) const {
  BitVec out = widen(fail);
  for (const auto& r : failmap_rules_) {
    if (out.contains_all(r.required)) out.set(r.target);
  }
  return out;
}

BitVec HierarchyLayout::widen(const BitVec& v) const {
  if (v.width() == width()) return v;
  if (v.width() != base_.width()) {
    throw WidthMismatch("vector width " + std::to_string(v.width()) + " does not match topology");
  }
  BitVec out(width());
  for (LinkId id : v.set_bits()) out.set(id);
  return out;
}

}  // namespace dproute
