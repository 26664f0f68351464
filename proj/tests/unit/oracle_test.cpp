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

#include "dproute/oracle.hpp"
#include "fixtures.hpp"

namespace dproute {
namespace {

using testing::diamond;

TEST(Oracle, ShortestActivePath) {
  Topology t = diamond();
  auto r = shortest_active_path(t, {}, 1, 4);
  EXPECT_TRUE(r.reachable);
  EXPECT_EQ(r.shortest_len, 2U);
  ASSERT_TRUE(r.a_shortest_path);
  EXPECT_EQ(r.a_shortest_path->front(), 1);
  EXPECT_EQ(r.a_shortest_path->back(), 4);

  r = shortest_active_path(t, {{2, 4}}, 1, 4);
  EXPECT_EQ(r.shortest_len, 2U);
  EXPECT_EQ(*r.a_shortest_path, (std::vector<SwitchId>{1, 3, 4}));

  r = shortest_active_path(t, {{2, 4}, {3, 4}}, 1, 4);
  EXPECT_FALSE(r.reachable);
  EXPECT_FALSE(r.shortest_len);

  r = shortest_active_path(t, {}, 2, 2);
  EXPECT_TRUE(r.reachable);
  EXPECT_EQ(r.shortest_len, 0U);
}

TEST(Oracle, FailureSetIsUndirected) {
  Topology t = diamond();
  auto r = shortest_active_path(t, {{4, 2}}, 1, 4);
  EXPECT_EQ(*r.a_shortest_path, (std::vector<SwitchId>{1, 3, 4}));
  EXPECT_EQ(failed_links_from_bits(t, t.link_pair_mask(2, 4)), (FailedLinks{{2, 4}}));
}

TEST(Oracle, CompliantPath) {
  Topology t = diamond();
  auto r = compliant_shortest_path(t, {}, 1, 4, {{3}});
  EXPECT_EQ(r.shortest_len, 2U);
  EXPECT_EQ(*r.a_shortest_path, (std::vector<SwitchId>{1, 3, 4}));

  EXPECT_EQ(compliant_shortest_path(t, {{2, 4}}, 1, 4, {{4}}).shortest_len,
            shortest_active_path(t, {{2, 4}}, 1, 4).shortest_len);

  r = compliant_shortest_path(t, {{1, 3}, {3, 4}}, 1, 4, {{3}});
  EXPECT_FALSE(r.reachable);

  // detour through 2 from 3's side: 1 -> 3 -> 4 -> 2 -> 4
  r = compliant_shortest_path(t, {}, 1, 4, {{3}, {2}});
  EXPECT_EQ(r.shortest_len, 4U);

  // replicas: the nearer instance wins
  r = compliant_shortest_path(t, {{1, 2}}, 1, 4, {{2, 3}});
  EXPECT_EQ(r.shortest_len, 2U);
}

TEST(Oracle, Components) {
  Topology t = diamond();
  auto c = active_components(t, {{1, 2}, {1, 3}});
  ASSERT_EQ(c.size(), 4U);
  EXPECT_NE(c[0], c[1]);
  EXPECT_EQ(c[1], c[2]);
  EXPECT_EQ(c[2], c[3]);
}

TEST(Oracle, Stretch) {
  Topology t = diamond();
  auto o = shortest_active_path(t, {{2, 4}}, 1, 4);
  EXPECT_EQ(stretch(4, o, true), 2.0);
  EXPECT_EQ(stretch(2, shortest_active_path(t, {}, 1, 4), true), 1.0);
  EXPECT_FALSE(stretch(4, o, false));
  EXPECT_EQ(stretch(0, shortest_active_path(t, {}, 1, 1), true), 1.0);
  EXPECT_FALSE(stretch(3, shortest_active_path(t, {{2, 4}, {3, 4}}, 1, 4), true));
}

}  // namespace
}  // namespace dproute
