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


#include <gtest/gtest.h>

#include <set>

#include "dproute/errors.hpp"
#include "dproute/hierarchy.hpp"
#include "dproute/rng.hpp"
#include "fixtures.hpp"

namespace dproute {
namespace {

using testing::diamond;
using testing::two_domain;

DomainPartition three_domains(const Topology& t) {
  return make_partition(t, {{1, 128}, {2, 128}, {3, 128}, {4, 129}, {5, 129}, {6, 129}});
}

bool members_connected(const Topology& t, const std::vector<SwitchId>& members) {
  std::set<SwitchId> in(members.begin(), members.end());
  std::set<SwitchId> seen{members.front()};
  std::vector<SwitchId> todo{members.front()};
  while (!todo.empty()) {
    SwitchId s = todo.back();
    todo.pop_back();
    for (SwitchId n : t.neighbors(s)) {
      if (in.contains(n) && seen.insert(n).second) todo.push_back(n);
    }
  }
  return seen.size() == in.size();
}

Topology random_connected(Rng& rng, SwitchId n, std::size_t extra) {
  std::vector<SwitchId> sw;
  std::set<Edge> edges;
  for (SwitchId i = 1; i <= n; ++i) {
    sw.push_back(i);
    if (i > 1) {
      auto p = static_cast<SwitchId>(1 + rng.below(i - 1));
      edges.insert({p, i});
    }
  }
  while (edges.size() < n - 1 + extra) {
    auto a = static_cast<SwitchId>(1 + rng.below(n));
    auto b = static_cast<SwitchId>(1 + rng.below(n));
    if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
  }
  return Topology::from_edges("rand", sw, {edges.begin(), edges.end()});
}

TEST(Partition, SingleDomain) {
  Topology t = diamond();
  auto p = partition_domains(t, 1, 3);
  EXPECT_EQ(p.size(), 1U);
  DomainGraph g = build_domain_graph(t, p);
  EXPECT_EQ(g.graph.switch_count(), 1U);
  EXPECT_TRUE(g.graph.links().empty());
  EXPECT_TRUE(g.failmap.empty());
  EXPECT_TRUE(p.virtual_switch.empty());
}

TEST(Partition, TwoConnectedHalves) {
  Topology t = diamond();
  auto p = partition_domains(t, 2, 7);
  ASSERT_EQ(p.size(), 2U);
  for (DomainId d : p.domain_ids) {
    EXPECT_GT(d, t.max_switch_id());
    EXPECT_TRUE(members_connected(t, p.members(d)));
  }
  DomainGraph g = build_domain_graph(t, p);
  EXPECT_EQ(g.graph.bidirectional_link_count(), 1U);
}

TEST(Partition, SeededAndDeterministic) {
  Topology t = testing::load_data("NetworkUsa.graphml");
  for (std::size_t n : {2U, 3U, 5U, 7U}) {
    auto a = partition_domains(t, n, 11);
    auto b = partition_domains(t, n, 11);
    EXPECT_EQ(a.domain_of, b.domain_of);
    EXPECT_EQ(a.size(), n);
    for (DomainId d : a.domain_ids) EXPECT_TRUE(members_connected(t, a.members(d)));
  }
}

TEST(Partition, Infeasible) {
  Topology t = diamond();
  EXPECT_THROW(partition_domains(t, 5, 1), PartitionInfeasible);
  EXPECT_THROW(partition_domains(t, 0, 1), PartitionInfeasible);
  EXPECT_THROW(make_partition(t, {{1, 128}, {2, 128}, {3, 128}}), PartitionInfeasible);
  EXPECT_THROW(make_partition(t, {{1, 2}, {2, 2}, {3, 2}, {4, 2}}), PartitionInfeasible);
}

TEST(Partition, LookupErrors) {
  Topology t = two_domain();
  auto p = three_domains(t);
  EXPECT_EQ(p.domain(5), 129);
  EXPECT_THROW(p.domain(9), UnknownSwitch);
  EXPECT_THROW(p.members(130), UnknownDomain);
}

TEST(DomainGraph, Failmap) {
  Topology t = two_domain();
  auto p = three_domains(t);
  DomainGraph g = build_domain_graph(t, p);
  auto fwd = g.graph.find_link(128, 129);
  auto back = g.graph.find_link(129, 128);
  ASSERT_TRUE(fwd && back);
  EXPECT_GT(*fwd, t.width());
  EXPECT_EQ(g.failmap.at(*fwd).set_bits(),
            (std::vector<LinkId>{*t.find_link(2, 4), *t.find_link(3, 5)}));
  EXPECT_EQ(g.failmap.at(*back).set_bits(),
            (std::vector<LinkId>{*t.find_link(4, 2), *t.find_link(5, 3)}));
}

TEST(DomainGraph, FailmapNeedsEveryPhysicalLink) {
  Topology t = two_domain();
  HierarchyLayout layout(t, three_domains(t));
  LinkId dl = *layout.domain_graph().graph.find_link(128, 129);
  BitVec fail = t.link_pair_mask(2, 4);
  EXPECT_FALSE(layout.map_failures(fail).test(dl));
  fail |= t.link_pair_mask(3, 5);
  BitVec mapped = layout.map_failures(fail);
  EXPECT_TRUE(mapped.test(dl));
  EXPECT_EQ(mapped.width(), layout.width());
  for (LinkId id : fail.set_bits()) EXPECT_TRUE(mapped.test(id));
}

TEST(DomainGraph, EveryInterDomainLinkMappedOnce) {
  Rng rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    Topology t = random_connected(rng, 10, 6);
    auto p = partition_domains(t, 3, static_cast<std::uint64_t>(trial));
    DomainGraph g = build_domain_graph(t, p);
    std::map<LinkId, int> seen;
    for (const auto& [dl, phys] : g.failmap) {
      const auto& link = g.graph.link(dl);
      for (LinkId id : phys.set_bits()) {
        ++seen[id];
        EXPECT_EQ(p.domain(t.link(id).from), link.from);
        EXPECT_EQ(p.domain(t.link(id).to), link.to);
      }
    }
    for (const auto& l : t.links()) {
      bool inter = p.domain(l.from) != p.domain(l.to);
      EXPECT_EQ(seen[l.id], inter ? 1 : 0);
    }
  }
}

TEST(Augment, Domain128) {
  Topology t = two_domain();
  auto p = three_domains(t);
  Topology a = augment_domain_topology(t, p, 128);
  SwitchId v = p.virtual_switch.at({128, 129});
  EXPECT_EQ(std::vector<SwitchId>(a.switches().begin(), a.switches().end()),
            (std::vector<SwitchId>{1, 2, 3, v}));
  EXPECT_TRUE(a.find_link(2, v));
  EXPECT_TRUE(a.find_link(3, v));
  EXPECT_TRUE(a.find_link(1, 2));
  EXPECT_FALSE(a.find_link(1, v));
  EXPECT_EQ(a.bidirectional_link_count(), 4U);
  EXPECT_THROW(augment_domain_topology(t, p, 200), UnknownDomain);
}

TEST(Augment, IsolatedDomainIsPlainSubgraph) {
  Topology t = diamond();
  auto p = partition_domains(t, 1, 1);
  Topology a = augment_domain_topology(t, p, p.domain_ids[0]);
  EXPECT_EQ(a.switch_count(), 4U);
  EXPECT_EQ(a.edges(), t.edges());
}

TEST(Augment, CesnetVirtualSwitchCount) {
  Topology t = testing::load_data("Cesnet201006.graphml");
  auto p = partition_domains(t, 3, 1);
  DomainGraph g = build_domain_graph(t, p);
  for (DomainId d : p.domain_ids) {
    Topology a = augment_domain_topology(t, p, d);
    std::size_t virt = a.switch_count() - p.members(d).size();
    EXPECT_LE(virt, 2U);
    EXPECT_EQ(virt, g.graph.degree(d));
  }
}

TEST(Layout, ScopeMasks) {
  Topology t = two_domain();
  HierarchyLayout layout(t, three_domains(t));
  const BitVec& flat = layout.flat_scope_mask();
  for (const auto& l : t.links()) EXPECT_FALSE(flat.test(l.id));
  EXPECT_EQ(flat.count(), layout.width() - t.width());
  const BitVec& intra = layout.domain_scope_mask(128);
  EXPECT_FALSE(intra.test(*t.find_link(1, 2)));
  EXPECT_TRUE(intra.test(*t.find_link(2, 4)));
  EXPECT_TRUE(intra.test(*t.find_link(5, 6)));
  SwitchId v = layout.virtual_switch(128, 129);
  EXPECT_TRUE(layout.is_virtual(v));
  EXPECT_TRUE(layout.is_domain(128));
  EXPECT_EQ(layout.virtual_target(v), (std::pair<DomainId, DomainId>{128, 129}));
  const VirtualLink* vl = layout.virtual_link(2, v);
  ASSERT_NE(vl, nullptr);
  EXPECT_EQ(vl->physical, std::vector<LinkId>{*t.find_link(2, 4)});
  EXPECT_FALSE(intra.test(vl->id));
  EXPECT_EQ(layout.widen(BitVec::with_bits(t.width(), {1})).width(), layout.width());
}

}  // namespace
}  // namespace dproute
