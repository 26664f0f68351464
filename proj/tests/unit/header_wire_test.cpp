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
#include "dproute/header.hpp"
#include "dproute/rng.hpp"
#include "dproute/wire.hpp"
#include "fixtures.hpp"

namespace dproute {
namespace {

using testing::diamond;

TEST(Header, InitMarksIncomingOfSource) {
  Topology t = diamond();
  PacketHeader h = init_header(t, 1, 4, BitVec(t.width()));
  EXPECT_EQ(h.visited.set_bits(), (std::vector<LinkId>{2, 6}));
  EXPECT_EQ(h.curr, 1);
  ASSERT_EQ(h.dst.size(), 1U);
  EXPECT_EQ(h.dst[0], 4);
  EXPECT_EQ(h.max_len, kInitialMaxLen);
}

TEST(Header, InitWithFailureComposesMasks) {
  Topology t = diamond();
  BitVec fail = t.link_pair_mask(1, 2);
  EXPECT_EQ(fail.to_string(4), "0000 0011");
  PacketHeader h = init_header(t, 1, 4, fail);
  EXPECT_EQ(h.visited.set_bits(), (std::vector<LinkId>{1, 2, 6}));
}

TEST(Header, InitErrors) {
  Topology t = diamond();
  EXPECT_THROW(init_header(t, 1, 4, BitVec(9)), WidthMismatch);
  EXPECT_THROW(init_header(t, 1, 7, BitVec(8)), UnknownSwitch);
  EXPECT_THROW(init_header(t, 0, 4, BitVec(8)), UnknownSwitch);
}

TEST(Header, PathCountsBeyondCapacity) {
  Path p(2);
  p.push(1);
  p.push(2);
  p.push(3);
  EXPECT_EQ(p.length(), 3);
  EXPECT_EQ(p.stored(), 2U);
  p.pop_back();
  EXPECT_EQ(p.length(), 2);
  EXPECT_EQ(p.stored(), 2U);
  p.truncate(1);
  EXPECT_EQ(p.hops().size(), 1U);
}

TEST(Header, MaxLenCap) {
  EXPECT_EQ(max_len_cap_for(2), 4);
  EXPECT_GE(max_len_cap_for(45), 45);
  auto cap = max_len_cap_for(45);
  EXPECT_EQ(cap & (cap - 1), 0);
}

PacketHeader random_header(Rng& rng) {
  std::size_t width = 2 * (1 + rng.below(130));
  PacketHeader h;
  h.src = static_cast<SwitchId>(1 + rng.below(100));
  h.final_dst = static_cast<SwitchId>(1 + rng.below(100));
  h.flow_id = static_cast<std::uint32_t>(rng.next());
  h.mode = rng.below(2) ? TraversalMode::kBfs : TraversalMode::kIddfs;
  h.curr = static_cast<SwitchId>(rng.below(100));
  for (std::size_t i = 0, n = rng.below(kMaxDst + 1); i < n; ++i) {
    h.dst.push_back(static_cast<SwitchId>(rng.below(200)));
  }
  h.origin = static_cast<SwitchId>(rng.below(300));
  h.home = static_cast<SwitchId>(rng.below(100));
  auto bits = [&] {
    BitVec v(width);
    for (LinkId i = 1; i <= width; ++i) {
      if (rng.below(3) == 0) v.set(i);
    }
    return v;
  };
  h.visited = bits();
  h.visited_init = bits();
  h.fail = bits();
  h.stack_sel = static_cast<std::uint8_t>(rng.below(2));
  auto path = [&] {
    Path p(static_cast<std::uint8_t>(1 + rng.below(10)));
    for (std::size_t i = 0, n = rng.below(14); i < n; ++i) {
      p.push(static_cast<SwitchId>(rng.below(100)));
    }
    return p;
  };
  for (auto& stack : h.bfs_stacks) {
    for (std::size_t i = 0, n = rng.below(5); i < n; ++i) {
      stack.push_back({static_cast<SwitchId>(rng.below(50)),
                       static_cast<std::int16_t>(rng.below(20)), path()});
    }
  }
  for (std::size_t i = 0, n = rng.below(6); i < n; ++i) {
    h.dfs_stack.push_back(static_cast<SwitchId>(rng.below(50)));
  }
  h.len = static_cast<std::int16_t>(static_cast<int>(rng.below(40)) - 1);
  h.max_len = static_cast<std::uint16_t>(4U << rng.below(4));
  h.max_len_cap = 64;
  h.exhausted = rng.below(2);
  h.explored = static_cast<std::uint32_t>(rng.below(1000));
  h.path = path();
  h.path_cursor = static_cast<std::uint8_t>(rng.below(8));
  h.path_base = static_cast<std::uint16_t>(rng.below(4));
  h.hierarchy = static_cast<std::uint8_t>(rng.below(2));
  h.flat = rng.below(2);
  h.domain_valid = rng.below(2);
  h.domain_path = path();
  h.domain_cursor = static_cast<std::uint8_t>(rng.below(4));
  if (rng.below(2)) {
    h.policy.mbox_chain.push_back({static_cast<SwitchId>(1 + rng.below(9)), 3});
    h.policy.chain_cursor = static_cast<std::uint8_t>(rng.below(2));
    h.policy.prefs.push_back({5, 0b10});
    h.policy.wcmp.push_back({2, {1, 3}, {1, 2}});
  }
  h.target_cursor = h.policy.chain_cursor;
  if (rng.below(2)) h.resolved_prefs.push_back({2, 0b11});
  return h;
}

TEST(Wire, RandomRoundTrip) {
  Rng rng(2026);
  for (int i = 0; i < 1000; ++i) {
    PacketHeader h = random_header(rng);
    auto bytes = encode(h, 0xabcd1234U);
    Decoded d = decode(bytes, 0xabcd1234U);
    EXPECT_EQ(d.fingerprint, 0xabcd1234U);
    EXPECT_EQ(d.scope, WireScope::kRecirculation);
    ASSERT_EQ(d.header, h) << "iteration " << i;
    EXPECT_EQ(encode(d.header, 0xabcd1234U), bytes);
  }
}

TEST(Wire, InterSwitchDropsTraversalScratch) {
  Topology t = diamond();
  PacketHeader h = init_header(t, 1, 4, BitVec(t.width()));
  auto bytes = encode(h, t.fingerprint(), WireScope::kInterSwitch);
  Decoded d = decode(bytes, t.fingerprint());
  EXPECT_EQ(d.scope, WireScope::kInterSwitch);
  EXPECT_TRUE(d.header.bfs_stacks[0].empty());
  EXPECT_TRUE(d.header.dfs_stack.empty());
  EXPECT_EQ(d.header.fail, h.fail);
  EXPECT_LT(bytes.size(), encode(h, t.fingerprint()).size());
}

TEST(Wire, EmptyPathEncodesZeroLength) {
  Topology t = diamond();
  PacketHeader h = init_header(t, 1, 4, BitVec(t.width()));
  auto text = annotated_hex(encode(h, t.fingerprint()));
  auto pos = text.find("; path\n");
  ASSERT_NE(pos, std::string::npos);
  auto line_start = text.rfind('\n', pos) + 1;
  // capacity 08, then a zero u16 length
  EXPECT_NE(text.substr(line_start, pos - line_start).find("08 00 00"), std::string::npos);
}

TEST(Wire, WideVectorsAreByteAligned) {
  Topology ring;
  {
    std::vector<SwitchId> sw;
    std::vector<Edge> edges;
    for (SwitchId i = 1; i <= 126; ++i) {
      sw.push_back(i);
      edges.push_back({i, static_cast<SwitchId>(i % 126 + 1)});
    }
    ring = Topology::from_edges("ring", sw, edges);
  }
  ASSERT_EQ(ring.width(), 252U);
  PacketHeader h = init_header(ring, 1, 60, BitVec(ring.width()));
  auto a = encode(h, 0);
  h.fail.set(252);
  h.visited.set(251);
  auto b = encode(h, 0);
  EXPECT_EQ(a.size(), b.size());
  EXPECT_EQ(h.fail.to_bytes().size(), 32U);
}

TEST(Wire, Errors) {
  Topology t = diamond();
  PacketHeader h = init_header(t, 1, 4, BitVec(t.width()));
  auto bytes = encode(h, 7);
  EXPECT_THROW(decode(std::span(bytes).first(bytes.size() - 1)), TruncatedHeader);
  EXPECT_THROW(decode(std::span(bytes).first(2)), TruncatedHeader);
  EXPECT_THROW(decode(bytes, 8U), VersionMismatch);
  auto bad = bytes;
  bad[2] = kWireVersion + 1;
  EXPECT_THROW(decode(bad), VersionMismatch);
  bad = bytes;
  bad[0] = 0;
  EXPECT_THROW(decode(bad), VersionMismatch);
  bytes.push_back(0);
  EXPECT_THROW(decode(bytes), ParseError);
}

}  // namespace
}  // namespace dproute
