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

#include "dproute/errors.hpp"
#include "dproute/hierarchy.hpp"
#include "dproute/policy.hpp"
#include "dproute/rule_json.hpp"
#include "dproute/ruleplane.hpp"
#include "fixtures.hpp"

namespace dproute {
namespace {

using testing::diamond;
using testing::fan3;
using testing::two_domain;

std::size_t key_index(const Table& t, Field f) {
  std::size_t k = 0;
  for (const auto& s : t.schema()) {
    if (s.field == f) return k;
    if (s.field != Field::kVisited) ++k;
  }
  throw std::logic_error("field not in schema");
}

TEST(BfsRules, PushRuleMatchesUnvisitedEdge) {
  Topology t = diamond();
  Table bfs = gen_bfs_rules(t);
  const auto curr = key_index(bfs, Field::kCurr);
  const auto stack = key_index(bfs, Field::kStackSel);
  std::size_t found = 0;
  for (const auto& r : bfs.rules()) {
    if (r.action.kind != ActionKind::kPushNeighbor || r.action.n != 2) continue;
    if (r.keys[curr].value != 1) continue;
    EXPECT_EQ(r.vec_value.to_ternary_string(r.vec_mask), "*******0");
    EXPECT_EQ(r.action.mask.set_bits(), (std::vector<LinkId>{1, 4}));
    EXPECT_EQ(r.keys[stack].value, found);
    ++found;
  }
  EXPECT_EQ(found, 2U);
}

TEST(BfsRules, PopRuleNeedsAllOutgoingVisited) {
  Topology t = diamond();
  Table bfs = gen_bfs_rules(t);
  const auto curr = key_index(bfs, Field::kCurr);
  std::size_t pops = 0;
  for (const auto& r : bfs.rules()) {
    if (r.action.kind != ActionKind::kPopStack || r.keys[curr].value != 1) continue;
    EXPECT_EQ(r.vec_value.to_ternary_string(r.vec_mask), "***1***1");
    ++pops;
  }
  EXPECT_EQ(pops, 2U);
}

TEST(BfsRules, Counts) {
  Topology edge = Topology::from_edges("edge", {1, 2}, {{1, 2}});
  EXPECT_EQ(gen_bfs_rules(edge).size(), 10U);
  Topology t = diamond();
  EXPECT_EQ(gen_bfs_rules(t).size(), 2 * t.links().size() + 2 * t.switch_count() + 2);
  EXPECT_EQ(gen_bfs_rules(t).default_action().kind, ActionKind::kUnreachable);
}

TEST(IddfsRules, EnumeratesLengths) {
  Topology edge = Topology::from_edges("edge", {1, 2}, {{1, 2}});
  Table iddfs = gen_iddfs_rules(edge, 4);
  const auto curr = key_index(iddfs, Field::kCurr);
  const auto len = key_index(iddfs, Field::kLen);
  const auto max_len = key_index(iddfs, Field::kMaxLen);
  std::vector<std::uint64_t> lens;
  for (const auto& r : iddfs.rules()) {
    if (r.action.kind == ActionKind::kGotoNeighbor && r.keys[curr].value == 1) {
      lens.push_back(r.keys[len].value);
      EXPECT_EQ(r.keys[max_len].value, 4U);
      EXPECT_EQ(r.vec_value.to_ternary_string(r.vec_mask), "*0");
    }
  }
  EXPECT_EQ(lens, (std::vector<std::uint64_t>{0, 1, 2, 3}));
}

TEST(IddfsRules, IncreaseLengthRule) {
  Topology t = diamond();
  Table iddfs = gen_iddfs_rules(t, 4);
  const auto curr = key_index(iddfs, Field::kCurr);
  const auto len = key_index(iddfs, Field::kLen);
  const auto max_len = key_index(iddfs, Field::kMaxLen);
  std::size_t n = 0;
  for (const auto& r : iddfs.rules()) {
    if (r.action.kind != ActionKind::kIncreaseLength) continue;
    EXPECT_EQ(r.keys[curr].value, kSentinel);
    EXPECT_EQ(static_cast<std::int16_t>(r.keys[len].value), -1);
    EXPECT_EQ(r.keys[max_len].value, 4U);
    EXPECT_EQ(r.vec_mask.count(), 0U);
    ++n;
  }
  EXPECT_EQ(n, 1U);
  EXPECT_EQ(iddfs.default_action().kind, ActionKind::kBacktrack);
}

TEST(IddfsRules, ClosedFormCount) {
  Topology t = diamond();
  EXPECT_EQ(gen_iddfs_rules(t, 8, false).size(), t.links().size() * (4 + 8) + 2);
  // one extra lpm rule per switch for its second neighbor
  EXPECT_EQ(gen_iddfs_rules(t, 8, true).size(), t.links().size() * 12 + 2 + 4 * 12);
  EXPECT_THROW(gen_iddfs_rules(t, 6), InvalidRule);
  EXPECT_THROW(gen_iddfs_rules(t, 2), InvalidRule);
}

TEST(ForwardingRules, Shape) {
  Topology t = diamond();
  Table fwd = gen_forwarding_rules(t, 2);
  EXPECT_EQ(fwd.size(), 1 + t.degree(2));
  EXPECT_EQ(fwd.rules()[0].action.kind, ActionKind::kDeliver);
  EXPECT_EQ(fwd.default_action().kind, ActionKind::kDivert);
  MatchInput in;
  in.scalar[static_cast<std::size_t>(Field::kCurr)] = 2;
  in.scalar[static_cast<std::size_t>(Field::kNextHop)] = 4;
  EXPECT_EQ(fwd.lookup(in).kind, ActionKind::kForward);
  EXPECT_EQ(fwd.lookup(in).n, 4);
  in.scalar[static_cast<std::size_t>(Field::kLocalFailed)] = 1;
  EXPECT_EQ(fwd.lookup(in).kind, ActionKind::kDivert);
  in.scalar[static_cast<std::size_t>(Field::kLocalFailed)] = 0;
  in.scalar[static_cast<std::size_t>(Field::kNextHop)] = 0;
  EXPECT_EQ(fwd.lookup(in).kind, ActionKind::kDivert);
  in.scalar[static_cast<std::size_t>(Field::kAtFinal)] = 1;
  EXPECT_EQ(fwd.lookup(in).kind, ActionKind::kDeliver);
}

TEST(HierarchyRules, SingleDomainRoutesFlat) {
  Topology t = diamond();
  HierarchyLayout layout(t, partition_domains(t, 1, 3));
  for (SwitchId s : t.switches()) {
    Table h = gen_hierarchy_rules(layout, s);
    for (const auto& r : h.rules()) {
      EXPECT_NE(r.action.kind, ActionKind::kDomainReroute);
    }
  }
}

TEST(HierarchyRules, TwoDomainShape) {
  Topology t = two_domain();
  HierarchyLayout layout(t, make_partition(t, {{1, 128}, {2, 128}, {3, 128},
                                               {4, 129}, {5, 129}, {6, 129}}));
  Table h = gen_hierarchy_rules(layout, 1);
  ASSERT_EQ(h.size(), 3U);
  EXPECT_EQ(h.rules()[0].action.kind, ActionKind::kDomainEnter);
  EXPECT_EQ(h.rules()[0].action.n, 0);
  EXPECT_EQ(h.rules()[0].action.mask, layout.domain_scope_mask(128));
  EXPECT_EQ(h.rules()[1].action.kind, ActionKind::kDomainEnter);
  EXPECT_EQ(h.rules()[1].action.n, layout.virtual_switch(128, 129));
  EXPECT_EQ(h.rules()[2].action.kind, ActionKind::kDomainReroute);
  EXPECT_EQ(h.rules()[2].action.n, 128);
  EXPECT_EQ(h.rules()[2].action.m, 129);
  EXPECT_EQ(h.default_action().kind, ActionKind::kFlatRoute);
}

TEST(WcmpRules, RangesOneTwoOne) {
  std::vector<std::uint8_t> prefs{0b00, 0b10, 0b11};
  auto r = wcmp_ranges({1, 2, 1}, prefs, 0b111);
  ASSERT_EQ(r.size(), 3U);
  EXPECT_EQ(r[0], (HashRange{0, 16384, 0b00, 0}));
  EXPECT_EQ(r[1], (HashRange{16384, 49152, 0b10, 1}));
  EXPECT_EQ(r[2], (HashRange{49152, 65536, 0b11, 2}));
  // middle hop down: the others split 1:1
  r = wcmp_ranges({1, 2, 1}, prefs, 0b101);
  ASSERT_EQ(r.size(), 2U);
  EXPECT_EQ(r[0], (HashRange{0, 32768, 0b00, 0}));
  EXPECT_EQ(r[1], (HashRange{32768, 65536, 0b11, 2}));
  r = wcmp_ranges({1}, {0b10}, 0b1);
  ASSERT_EQ(r.size(), 1U);
  EXPECT_EQ(r[0], (HashRange{0, 65536, 0b10, 0}));
}

TEST(WcmpRules, TernaryCoverIsExact) {
  for (auto [lo, hi] : {std::pair<std::uint32_t, std::uint32_t>{0, 65536}, {16384, 49152},
                        {3, 1000}, {21845, 43690}}) {
    auto cover = range_to_ternary(lo, hi, 16);
    std::vector<int> hits(65536, 0);
    for (auto [v, m] : cover) {
      for (std::uint32_t x = 0; x < 65536; ++x) {
        if ((x & m) == v) ++hits[x];
      }
    }
    for (std::uint32_t x = 0; x < 65536; ++x) {
      ASSERT_EQ(hits[x], (x >= lo && x < hi) ? 1 : 0) << x;
    }
  }
}

TEST(WcmpRules, TableMapsHashToPref) {
  Topology t = fan3();
  WcmpShape shape = wcmp_shape(t, {1, {2, 3, 4}, {1, 2, 1}});
  EXPECT_EQ(shape.prefs, (std::vector<std::uint8_t>{0b00, 0b10, 0b11}));
  Table table = gen_wcmp_pre_rules(shape);
  auto pref_at = [&](std::uint32_t active, std::uint32_t hash) {
    MatchInput in;
    in.scalar[static_cast<std::size_t>(Field::kActiveMask)] = active;
    in.scalar[static_cast<std::size_t>(Field::kHash)] = hash;
    return table.lookup(in).value;
  };
  EXPECT_EQ(pref_at(0b111, 0), 0b00);
  EXPECT_EQ(pref_at(0b111, 16383), 0b00);
  EXPECT_EQ(pref_at(0b111, 16384), 0b10);
  EXPECT_EQ(pref_at(0b111, 49151), 0b10);
  EXPECT_EQ(pref_at(0b111, 49152), 0b11);
  EXPECT_EQ(pref_at(0b101, 40000), 0b11);
  EXPECT_EQ(pref_at(0b010, 7), 0b10);
  EXPECT_THROW(gen_wcmp_pre_rules({{0, 0}, {0, 0b10}}), ZeroWeightSum);
}

TEST(CompileRules, SharedTraversalTables) {
  Topology t = diamond();
  RuleSet rs = compile_rules(t);
  EXPECT_FALSE(rs.hierarchical);
  EXPECT_EQ(rs.switches.size(), 4U);
  for (const auto& [s, sr] : rs.switches) {
    EXPECT_EQ(sr.bfs.get(), rs.bfs.get());
    EXPECT_FALSE(sr.hierarchy);
  }
  EXPECT_EQ(rs.fingerprint, t.fingerprint());
  EXPECT_EQ(rs.max_len_cap, max_len_cap_for(4));
}

TEST(CompileRules, HierarchicalUsesUnionTopology) {
  Topology t = load_topology(testing::data_path("topologies/Cesnet201006.graphml"));
  HierarchyLayout layout(t, partition_domains(t, 3, 1));
  RuleSet rs = compile_rules(t, &layout);
  EXPECT_TRUE(rs.hierarchical);
  EXPECT_EQ(rs.width, layout.width());
  EXPECT_EQ(rs.switches.size(), t.switch_count());
  for (const auto& [s, sr] : rs.switches) EXPECT_TRUE(sr.hierarchy);
  auto manifest = manifest_to_json(rs, t.name());
  EXPECT_NE(manifest.find("hierarchy"), std::string::npos);
}

TEST(RuleJson, RoundTripAndDeterminism) {
  Topology t = diamond();
  RuleSet a = compile_rules(t);
  RuleSet b = compile_rules(t);
  EXPECT_EQ(traversal_rules_to_json(a), traversal_rules_to_json(b));
  for (SwitchId s : t.switches()) EXPECT_EQ(switch_rules_to_json(a, s), switch_rules_to_json(b, s));
  for (const Table* table : std::vector<const Table*>{a.bfs.get(), a.iddfs.get(),
                                                     &a.switches.at(1).forwarding}) {
    std::string text = table_to_json(*table);
    Table back = table_from_json(text);
    EXPECT_EQ(back.rules(), table->rules());
    EXPECT_EQ(back.default_action(), table->default_action());
    EXPECT_EQ(table_to_json(back), text);
  }
  EXPECT_NE(table_to_json(*a.bfs).find("\"*******0\""), std::string::npos);
  EXPECT_THROW(table_from_json("{\"table\":1}"), ParseError);
}

TEST(RuleJson, WcmpAndHierarchyRoundTrip) {
  Topology t = two_domain();
  HierarchyLayout layout(t, make_partition(t, {{1, 128}, {2, 128}, {3, 128},
                                               {4, 129}, {5, 129}, {6, 129}}));
  Table h = gen_hierarchy_rules(layout, 2);
  EXPECT_EQ(table_from_json(table_to_json(h)).rules(), h.rules());
  Table w = gen_wcmp_pre_rules({{1, 2, 1}, {0b00, 0b10, 0b11}});
  EXPECT_EQ(table_from_json(table_to_json(w)).rules(), w.rules());
}

}  // namespace
}  // namespace dproute
