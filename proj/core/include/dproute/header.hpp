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

#ifndef DPROUTE_HEADER_HPP_
#define DPROUTE_HEADER_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "dproute/bitvec.hpp"
#include "dproute/policy.hpp"
#include "dproute/topology.hpp"
#include "dproute/types.hpp"

namespace dproute {

inline constexpr std::size_t kMaxDst = 4;
inline constexpr std::uint8_t kDefaultPathCapacity = 8;
inline constexpr std::uint16_t kInitialMaxLen = 4;

// Source route. Keeps the logical length of the route even when more hops
// than `capacity` were written; hops past the capacity are dropped, so the
// switch at the last stored hop recomputes.
class Path {
 public:
  explicit Path(std::uint8_t capacity = kDefaultPathCapacity) : capacity_(capacity) {}

  std::uint8_t capacity() const noexcept { return capacity_; }
  std::uint16_t length() const noexcept { return length_; }
  std::size_t stored() const noexcept { return hops_.size(); }
  bool empty() const noexcept { return length_ == 0; }
  std::span<const SwitchId> hops() const noexcept { return {hops_.data(), hops_.size()}; }
  SwitchId operator[](std::size_t i) const noexcept { return i < hops_.size() ? hops_[i] : 0; }

  void push(SwitchId s) {
    if (length_ < capacity_) hops_.push_back(s);
    ++length_;
  }
  void pop_back() {
    if (length_ == 0) return;
    --length_;
    if (hops_.size() > length_) hops_.pop_back();
  }
  void truncate(std::uint16_t n) {
    if (n >= length_) return;
    length_ = n;
    if (hops_.size() > n) hops_.resize(n);
  }
  void clear() noexcept {
    hops_.clear();
    length_ = 0;
  }
  // Rebuilds from raw parts (wire decoding).
  void assign(std::uint8_t capacity, std::uint16_t length, std::span<const SwitchId> hops);

  friend bool operator==(const Path& a, const Path& b) noexcept {
    return a.capacity_ == b.capacity_ && a.length_ == b.length_ && a.hops_ == b.hops_;
  }

 private:
  std::uint8_t capacity_;
  std::uint16_t length_ = 0;
  boost::container::small_vector<SwitchId, 8> hops_;
};

struct BfsEntry {
  SwitchId sw = kSentinel;
  std::int16_t len = 0;
  Path path;

  friend bool operator==(const BfsEntry&, const BfsEntry&) = default;
};

using DstSet = boost::container::small_vector<SwitchId, kMaxDst>;

// Complete inter-switch protocol state plus the in-switch traversal state
// that survives recirculation.
struct PacketHeader {
  // flow
  SwitchId src = 0;
  SwitchId final_dst = 0;
  std::uint32_t flow_id = 0;
  TraversalMode mode = TraversalMode::kIddfs;

  // traversal target and cursor
  SwitchId curr = 0;
  DstSet dst;
  SwitchId origin = 0;  // traversal start (switch or domain id)
  SwitchId home = 0;    // switch executing the traversal

  BitVec visited;
  BitVec visited_init;
  BitVec fail;

  // BFS
  std::uint8_t stack_sel = 0;
  std::array<std::vector<BfsEntry>, 2> bfs_stacks;
  // IDDFS
  std::vector<SwitchId> dfs_stack;
  std::int16_t len = 0;
  std::uint16_t max_len = kInitialMaxLen;
  std::uint16_t max_len_cap = kInitialMaxLen;
  bool exhausted = false;
  std::uint32_t explored = 0;

  // source route
  Path path;
  std::uint8_t path_cursor = 0;
  std::uint16_t path_base = 0;

  // hierarchy
  std::uint8_t hierarchy = 0;
  bool flat = false;
  bool domain_valid = false;
  Path domain_path;
  std::uint8_t domain_cursor = 0;

  // policy
  PolicyBlock policy;
  std::uint8_t target_cursor = 0;
  std::vector<PrefEntry> resolved_prefs;

  bool in_dst(SwitchId s) const noexcept {
    for (SwitchId d : dst) {
      if (d == s) return true;
    }
    return false;
  }
  // Next hop of the source route, 0 when exhausted.
  SwitchId next_hop() const noexcept { return path[path_cursor]; }
  bool path_exhausted() const noexcept { return path_cursor >= path.stored(); }
  std::uint8_t pref_of(SwitchId s) const noexcept {
    for (const auto& p : resolved_prefs) {
      if (p.sw == s) return p.pref;
    }
    return 0;
  }
  bool other_stack_live() const noexcept { return bfs_stacks[stack_sel ^ 1].size() > 1; }

  friend bool operator==(const PacketHeader&, const PacketHeader&) = default;
};

// Smallest power of two >= 2 * switch count, at least kInitialMaxLen.
std::uint16_t max_len_cap_for(std::size_t switch_count);

// Starts a traversal at `origin` toward `targets` with the given initial
// visited vector (which should already include failures and scope masks).
// The incoming links of `origin` are marked visited here.
void reset_traversal(PacketHeader& h, const Topology& t, SwitchId origin, const DstSet& targets,
                     const BitVec& visited_init);

// Header for a fresh flat traversal at src:
// visited = fail | incoming(src), len 0, max_len 4, empty stacks and path.
// Throws WidthMismatch when fail.width() != t.width().
PacketHeader init_header(const Topology& t, SwitchId src, SwitchId dst, const BitVec& fail,
                         const PolicyBlock& policy = {},
                         TraversalMode mode = TraversalMode::kIddfs,
                         std::uint8_t path_capacity = kDefaultPathCapacity);

// Current traversal target per the policy chain: replica set `cursor` or
// {final_dst} when the chain is complete.
DstSet chain_target(const PacketHeader& h, std::size_t cursor);

std::string describe(const PacketHeader& h);

}  // namespace dproute

#endif  // DPROUTE_HEADER_HPP_
