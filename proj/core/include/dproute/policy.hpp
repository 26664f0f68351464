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

#ifndef DPROUTE_POLICY_HPP_
#define DPROUTE_POLICY_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dproute/topology.hpp"
#include "dproute/types.hpp"

namespace dproute {

inline constexpr std::size_t kMaxReplicas = 4;
inline constexpr std::size_t kMaxPrefHops = 4;
inline constexpr unsigned kPrefBits = 2;
inline constexpr unsigned kHashBits = 16;

using ReplicaSet = std::vector<SwitchId>;

struct WcmpEntry {
  SwitchId sw = 0;
  std::vector<SwitchId> next_hops;
  std::vector<std::uint32_t> weights;

  friend bool operator==(const WcmpEntry&, const WcmpEntry&) = default;
};

struct PrefEntry {
  SwitchId sw = 0;
  std::uint8_t pref = 0;

  friend bool operator==(const PrefEntry&, const PrefEntry&) = default;
};

// Policy state carried in the packet.
struct PolicyBlock {
  std::vector<ReplicaSet> mbox_chain;
  std::uint8_t chain_cursor = 0;
  std::vector<PrefEntry> prefs;
  std::vector<WcmpEntry> wcmp;
  TraversalMode traversal_mode = TraversalMode::kIddfs;

  bool empty() const noexcept { return mbox_chain.empty() && prefs.empty() && wcmp.empty(); }
  bool chain_complete() const noexcept { return chain_cursor >= mbox_chain.size(); }

  friend bool operator==(const PolicyBlock&, const PolicyBlock&) = default;
};

// Flow selector; 0 matches any switch.
struct Flow {
  SwitchId src = 0;
  SwitchId dst = 0;

  bool matches(SwitchId s, SwitchId d) const noexcept {
    return (src == 0 || src == s) && (dst == 0 || dst == d);
  }
};

// Policy-plane API. Each call validates against `t` and returns the extended
// block. Throws UnknownSwitch, InvalidPolicy, IncompatibleTraversal,
// DegreeTooHigh, ZeroWeightSum.
PolicyBlock add_mbox_chain(const Topology& t, PolicyBlock block,
                           const std::vector<ReplicaSet>& chain);
PolicyBlock add_preference(const Topology& t, PolicyBlock block, SwitchId n1, SwitchId n2);
PolicyBlock add_weighted_lb(const Topology& t, PolicyBlock block, SwitchId n,
                            const std::vector<SwitchId>& next_hops,
                            const std::vector<std::uint32_t>& weights);

// 2-bit pref value that makes neighbor `index` (in ascending out-link order)
// win the lpm lookup: 0 -> 00, 1 -> 10, 2 -> 11, 3 -> 01.
std::uint8_t pref_for_index(std::size_t index);

// Lpm pattern of the extra preferred rule for neighbor `index` >= 1, as
// (value, prefix length) over kPrefBits. Index 0 only has the "**" rule.
std::pair<std::uint8_t, unsigned> pref_pattern(std::size_t index);

// Position of `to` among the out-links of `from`; throws InvalidPolicy when
// they are not adjacent.
std::size_t neighbor_index(const Topology& t, SwitchId from, SwitchId to);

// 32-bit mix of the flow tuple; WCMP uses the top kHashBits bits.
std::uint32_t flow_hash32(SwitchId src, SwitchId dst, std::uint32_t flow_id);
std::uint16_t flow_hash(SwitchId src, SwitchId dst, std::uint32_t flow_id);

// Half-open hash interval [lo, hi) over the kHashBits space mapped to a pref.
struct HashRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  std::uint8_t pref = 0;
  std::size_t hop = 0;  // position in the entry's next_hops

  friend bool operator==(const HashRange&, const HashRange&) = default;
};

// Splits the hash space among the active hops proportionally to their
// weights. Boundary i is floor(cumulative_i * 2^16 / total). Empty when no
// hop is active. Throws ZeroWeightSum when active weights sum to zero.
std::vector<HashRange> wcmp_ranges(const std::vector<std::uint32_t>& weights,
                                   const std::vector<std::uint8_t>& prefs,
                                   std::uint32_t active_mask);

// Minimal set of (value, mask) ternary patterns covering [lo, hi) over
// `bits`-wide integers.
std::vector<std::pair<std::uint32_t, std::uint32_t>> range_to_ternary(std::uint32_t lo,
                                                                      std::uint32_t hi,
                                                                      unsigned bits);

struct PolicyRule {
  Flow flow;
  PolicyBlock block;
};

// Policies loaded from a policy file, looked up per flow.
class PolicySet {
 public:
  void add(PolicyRule rule) { rules_.push_back(std::move(rule)); }
  const std::vector<PolicyRule>& rules() const noexcept { return rules_; }
  bool empty() const noexcept { return rules_.empty(); }

  // Merge of every block whose flow matches, in file order, with `mode`.
  PolicyBlock for_flow(SwitchId src, SwitchId dst, TraversalMode mode) const;

 private:
  std::vector<PolicyRule> rules_;
};

// Policy file: [{"type": "mbox", "flow": {"src": 1, "dst": 4},
//                "chain": [[3], [5, 6]]},
//               {"type": "pref", "flow": {...}, "switch": 1, "next": 4},
//               {"type": "wcmp", "flow": {...}, "switch": 1,
//                "next_hops": [2, 3, 4], "weights": [1, 2, 1]}]
PolicySet parse_policy_json(const Topology& t, const std::string& text, TraversalMode mode);
PolicySet load_policy_file(const Topology& t, const std::filesystem::path& path,
                           TraversalMode mode);

}  // namespace dproute

#endif  // DPROUTE_POLICY_HPP_
