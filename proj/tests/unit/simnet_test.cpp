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

#include <algorithm>
#include <memory>

#include "dproute/errors.hpp"
#include "dproute/experiment.hpp"
#include "dproute/oracle.hpp"
#include "dproute/ruleplane.hpp"
#include "dproute/simnet.hpp"
#include "fixtures.hpp"

namespace dproute {
namespace {

using testing::diamond;
using Hops = std::vector<SwitchId>;

TEST(Network, BuildsFromRules) {
  Network net = make_network(diamond());
  EXPECT_EQ(net.switch_count(), 4U);
  EXPECT_EQ(net.up_link_count(), 8U);
  EXPECT_FALSE(net.hierarchical());
  Topology cesnet = testing::load_data("Cesnet201006.graphml");
  Network big = make_network(cesnet);
  EXPECT_EQ(big.switch_count(), cesnet.switch_count());
  EXPECT_EQ(big.up_link_count(), cesnet.width());
}

TEST(Network, MissingRules) {
  auto t = std::make_shared<const Topology>(diamond());
  auto rs = std::make_shared<RuleSet>(compile_rules(*t));
  rs->switches.erase(3);
  EXPECT_THROW(build_network(t, rs), MissingRules);
  auto other = std::make_shared<const RuleSet>(compile_rules(testing::fan3()));
  EXPECT_THROW(build_network(t, other), MissingRules);
}

TEST(Network, LinkEvents) {
  Network net = make_network(diamond());
  net.link_down(1, 2);
  BitVec once = net.down_links();
  net.link_down(2, 1);
  EXPECT_EQ(net.down_links(), once);
  EXPECT_EQ(net.up_link_count(), 6U);
  EXPECT_THROW(net.link_down(1, 4), UnknownLink);
  net.link_up(1, 2);
  EXPECT_EQ(net.up_link_count(), 8U);
  net.link_down(3, 4);
  net.restore_all();
  EXPECT_TRUE(net.down_links().none());
}

TEST(RunPacket, NoFailures) {
  Network net = make_network(diamond());
  auto tr = net.run_packet(1, 4);
  EXPECT_TRUE(tr.delivered);
  EXPECT_EQ(tr.hops, (Hops{1, 2, 4}));
  EXPECT_EQ(tr.total_recirc, 0U);
  EXPECT_EQ(tr.recomputations, 1U);
  // only the source runs the traversal
  EXPECT_EQ(tr.per_switch_applications.count(2) ? tr.per_switch_applications.at(2) : 0U, 0U);
  EXPECT_EQ(tr.per_switch_applications.count(4) ? tr.per_switch_applications.at(4) : 0U, 0U);
}

TEST(RunPacket, SourceIsDestination) {
  Network net = make_network(diamond());
  auto tr = net.run_packet(3, 3);
  EXPECT_TRUE(tr.delivered);
  EXPECT_EQ(tr.hop_count(), 0U);
  EXPECT_EQ(tr.total_recirc, 0U);
}

TEST(RunPacket, DetourAroundFailedLink) {
  Network net = make_network(diamond());
  net.link_down(2, 4);
  for (auto mode : {TraversalMode::kIddfs, TraversalMode::kBfs}) {
    auto tr = net.run_packet(1, 4, {}, mode);
    EXPECT_TRUE(tr.delivered);
    if (mode == TraversalMode::kIddfs) {
      EXPECT_EQ(tr.hops, (Hops{1, 2, 1, 3, 4}));
      EXPECT_EQ(tr.recomputations, 2U);
      auto o = shortest_active_path(net.topology(), {{2, 4}}, 1, 4);
      EXPECT_EQ(stretch(tr.hop_count(), o, tr.delivered), 2.0);
    } else {
      EXPECT_EQ(tr.hops, (Hops{1, 3, 4}));
    }
    EXPECT_TRUE(tr.final_header.fail.none() || tr.final_header.fail.count() == 2);
  }
}

TEST(RunPacket, IsolatedDestinationDrops) {
  Network net = make_network(diamond());
  net.link_down(2, 4);
  net.link_down(3, 4);
  auto tr = net.run_packet(1, 4);
  EXPECT_FALSE(tr.delivered);
  EXPECT_EQ(tr.drop_reason, DropReason::kUnreachable);
}

TEST(RunPacket, MiddleboxChain) {
  Topology t = diamond();
  Network net = make_network(t);
  PolicyBlock bfs;
  bfs.traversal_mode = TraversalMode::kBfs;
  auto tr = net.run_packet(1, 4, add_mbox_chain(t, bfs, {{3}}), TraversalMode::kBfs);
  EXPECT_TRUE(tr.delivered);
  EXPECT_EQ(tr.hops, (Hops{1, 3, 4}));
  tr = net.run_packet(1, 4, add_mbox_chain(t, bfs, {{2, 3}}), TraversalMode::kBfs);
  EXPECT_TRUE(tr.delivered);
  EXPECT_EQ(tr.hop_count(), 2U);
  // depth-first legs: 1 -> 2 -> 4 -> 3 reaches the middlebox, then 3 -> 1 -> 2 -> 4
  tr = net.run_packet(1, 4, add_mbox_chain(t, {}, {{3}}));
  EXPECT_TRUE(tr.delivered);
  EXPECT_EQ(tr.hops, (Hops{1, 2, 4, 3, 1, 2, 4}));
}

TEST(RunPacket, FiredRulesShowPreferenceFirst) {
  Topology t = testing::fan3();
  NetworkOptions opt;
  opt.pipeline.record_fired = true;
  Network net = make_network(t, std::nullopt, opt);
  auto tr = net.run_packet(1, 5, add_preference(t, {}, 1, 4));
  ASSERT_TRUE(tr.delivered);
  EXPECT_EQ(tr.hops, (Hops{1, 4, 5}));
  auto first = std::find_if(tr.fired.begin(), tr.fired.end(), [](const SwitchFired& f) {
    return f.rule.action == ActionKind::kGotoNeighbor;
  });
  ASSERT_NE(first, tr.fired.end());
  EXPECT_EQ(first->sw, 1);
  EXPECT_EQ(first->rule.n, 4);
}

TEST(RunScript, FailoverSequence) {
  Network net = make_network(diamond());
  auto traces = net.run_script(load_event_script(testing::data_path("scripts/failover.json")));
  ASSERT_EQ(traces.size(), 3U);
  EXPECT_EQ(traces[0].hops, (Hops{1, 2, 4}));
  EXPECT_EQ(traces[1].hops, (Hops{1, 3, 4}));
  EXPECT_EQ(traces[2].hops, (Hops{1, 2, 4}));
  for (const auto& tr : traces) EXPECT_TRUE(tr.delivered);
}

TEST(RunScript, NoLinkEventsAndOrdering) {
  Network net = make_network(diamond());
  auto script = parse_event_script(R"([
    {"seq": 5, "action": "inject", "src": 4, "dst": 1},
    {"seq": 1, "action": "inject", "src": 1, "dst": 4}
  ])");
  ASSERT_EQ(script.events.size(), 2U);
  EXPECT_EQ(script.events[0].src, 1);
  auto traces = net.run_script(script);
  EXPECT_EQ(traces[0].hops, (Hops{1, 2, 4}));
  EXPECT_EQ(traces[1].hops.back(), 1);
  EXPECT_TRUE(net.run_script(parse_event_script("[]")).empty());
  EXPECT_THROW(parse_event_script(R"([{"action": "down", "link": [1]}])"), ParseError);
  EXPECT_THROW(parse_event_script("{"), ParseError);
}

TEST(Hierarchical, TwoDomainRoute) {
  Topology t = testing::two_domain();
  auto p = make_partition(t, {{1, 128}, {2, 128}, {3, 128}, {4, 129}, {5, 129}, {6, 129}});
  Network net = make_network(t, p);
  EXPECT_TRUE(net.hierarchical());
  for (auto mode : {TraversalMode::kBfs, TraversalMode::kIddfs}) {
    auto tr = net.run_packet(1, 6, {}, mode);
    ASSERT_TRUE(tr.delivered);
    EXPECT_EQ(tr.hop_count(), 3U);
    EXPECT_TRUE(tr.hops[2] == 4 || tr.hops[2] == 5);
    EXPECT_EQ(tr.fallbacks, 0U);
  }
  // 1 only learns about 2-4 at switch 2, as in the flat walk
  net.link_down(2, 4);
  auto tr = net.run_packet(1, 6);
  ASSERT_TRUE(tr.delivered);
  EXPECT_EQ(tr.hops, (Hops{1, 2, 1, 3, 5, 6}));
}

TEST(Hierarchical, FallbackWhenDomainSplits) {
  Topology t = diamond();
  auto p = make_partition(t, {{1, 128}, {2, 128}, {3, 129}, {4, 130}});
  Network net = make_network(t, p);
  const auto bfs = TraversalMode::kBfs;
  auto tr = net.run_packet(1, 4, {}, bfs);
  ASSERT_TRUE(tr.delivered);
  EXPECT_EQ(tr.fallbacks, 0U);
  // 128 still borders 130 through 2-4, but 1 no longer reaches 2 inside 128
  net.link_down(1, 2);
  tr = net.run_packet(1, 4, {}, bfs);
  ASSERT_TRUE(tr.delivered);
  EXPECT_EQ(tr.fallbacks, 1U);
  EXPECT_EQ(tr.hops, (Hops{1, 3, 4}));
  net.link_down(3, 4);
  tr = net.run_packet(1, 4, {}, bfs);
  EXPECT_FALSE(tr.delivered);
  EXPECT_FALSE(shortest_active_path(t, {{1, 2}, {3, 4}}, 1, 4).reachable);
}

TEST(Hierarchical, MatchesOracleUnderFailures) {
  Topology t = testing::load_data("Cesnet201006.graphml");
  ExperimentConfig cfg;
  cfg.domains = 3;
  cfg.k = 3;
  cfg.scenarios = 3;
  cfg.seed = 4;
  auto res = run_experiment(t, cfg);
  EXPECT_EQ(res.summary.delivery_matches_oracle, res.summary.rows);
}

TEST(Trace, JsonAndFormat) {
  Network net = make_network(diamond());
  auto tr = net.run_packet(1, 4);
  EXPECT_EQ(format_hops(tr.hops), "1 -> 2 -> 4");
  auto j = trace_to_json(tr);
  EXPECT_NE(j.find("\"delivered\":true"), std::string::npos);
}

}  // namespace
}  // namespace dproute
