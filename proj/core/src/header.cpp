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

#include "dproute/header.hpp"

#include <bit>
#include <sstream>

#include "dproute/errors.hpp"

namespace dproute {

void Path::assign(std::uint8_t capacity, std::uint16_t length, std::span<const SwitchId> hops) {
  capacity_ = capacity;
  length_ = length;
  hops_.assign(hops.begin(), hops.end());
}

std::uint16_t max_len_cap_for(std::size_t switch_count) {
  auto cap = std::bit_ceil(static_cast<std::uint32_t>(2 * switch_count));
  return static_cast<std::uint16_t>(std::max<std::uint32_t>(cap, kInitialMaxLen));
}

void reset_traversal(PacketHeader& h, const Topology& t, SwitchId origin, const DstSet& targets,
                     const BitVec& visited_init) {
  h.curr = origin;
  h.origin = origin;
  h.dst = targets;
  h.visited_init = visited_init;
  h.visited_init |= t.edge_mask(origin, Direction::kIncoming);
  h.visited = h.visited_init;
  h.stack_sel = 0;
  for (auto& s : h.bfs_stacks) {
    s.clear();
    s.push_back(BfsEntry{kSentinel, 0, Path(h.path.capacity())});
  }
  h.dfs_stack.assign(1, kSentinel);
  h.len = 0;
  h.max_len = kInitialMaxLen;
  h.max_len_cap = max_len_cap_for(t.switch_count());
  h.exhausted = false;
  h.path.truncate(h.path_base);
}

PacketHeader init_header(const Topology& t, SwitchId src, SwitchId dst, const BitVec& fail,
                         const PolicyBlock& policy, TraversalMode mode,
                         std::uint8_t path_capacity) {
  if (src == kSentinel) throw UnknownSwitch("switch 0 is the stack sentinel");
  if (!t.has_switch(src)) throw UnknownSwitch("unknown switch " + std::to_string(src));
  if (!t.has_switch(dst)) throw UnknownSwitch("unknown switch " + std::to_string(dst));
  if (fail.width() != t.width()) {
    throw WidthMismatch("failure vector width " + std::to_string(fail.width()) +
                        " != topology width " + std::to_string(t.width()));
  }
  PacketHeader h;
  h.src = src;
  h.final_dst = dst;
  h.mode = mode;
  h.home = src;
  h.fail = fail;
  h.policy = policy;
  h.path = Path(path_capacity);
  h.domain_path = Path(path_capacity);
  h.target_cursor = h.policy.chain_cursor;
  reset_traversal(h, t, src, chain_target(h, h.target_cursor), fail);
  return h;
}

DstSet chain_target(const PacketHeader& h, std::size_t cursor) {
  DstSet out;
  if (cursor < h.policy.mbox_chain.size()) {
    for (SwitchId s : h.policy.mbox_chain[cursor]) out.push_back(s);
  } else {
    out.push_back(h.final_dst);
  }
  return out;
}

std::string describe(const PacketHeader& h) {
  std::ostringstream os;
  os << "curr=" << h.curr << " dst={";
  for (std::size_t i = 0; i < h.dst.size(); ++i) os << (i ? "," : "") << h.dst[i];
  os << "} final_dst=" << h.final_dst << " len=" << h.len << " max_len=" << h.max_len
     << " stack=" << int(h.stack_sel) << " path=[";
  auto hops = h.path.hops();
  for (std::size_t i = 0; i < hops.size(); ++i) os << (i ? "," : "") << hops[i];
  os << "] cursor=" << int(h.path_cursor) << " hierarchy=" << int(h.hierarchy)
     << " visited=" << h.visited.to_string() << " fail=" << h.fail.to_string();
  return os.str();
}

}  // namespace dproute
