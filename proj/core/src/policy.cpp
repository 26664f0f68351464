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

#include "dproute/policy.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "dproute/errors.hpp"

namespace dproute {

namespace {

void require_switch(const Topology& t, SwitchId s) {
  if (!t.has_switch(s)) throw UnknownSwitch("unknown switch " + std::to_string(s));
}

void require_iddfs(const PolicyBlock& b, const char* what) {
  if (b.traversal_mode != TraversalMode::kIddfs) {
    throw IncompatibleTraversal(std::string(what) + " policies require iddfs traversal");
  }
}

void require_degree(const Topology& t, SwitchId n) {
  if (t.degree(n) > kMaxPrefHops) {
    throw DegreeTooHigh("switch " + std::to_string(n) + " has degree " +
                        std::to_string(t.degree(n)) + "; 2-bit preferences cover at most 4");
  }
}

}  // namespace

std::size_t neighbor_index(const Topology& t, SwitchId from, SwitchId to) {
  auto links = t.out_links(from);
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i].to == to) return i;
  }
  throw InvalidPolicy("switch " + std::to_string(to) + " is not a neighbor of " +
                      std::to_string(from));
}

std::uint8_t pref_for_index(std::size_t index) {
  static constexpr std::uint8_t kPrefs[kMaxPrefHops] = {0b00, 0b10, 0b11, 0b01};
  if (index >= kMaxPrefHops) throw DegreeTooHigh("neighbor index beyond 2-bit preference range");
  return kPrefs[index];
}

std::pair<std::uint8_t, unsigned> pref_pattern(std::size_t index) {
  switch (index) {
    case 0: return {0b00, 0};
    case 1: return {0b10, 1};
    case 2: return {0b11, 2};
    case 3: return {0b01, 2};
    default: throw DegreeTooHigh("neighbor index beyond 2-bit preference range");
  }
}

PolicyBlock add_mbox_chain(const Topology& t, PolicyBlock block,
                           const std::vector<ReplicaSet>& chain) {
  if (chain.empty()) throw InvalidPolicy("middlebox chain is empty");
  for (const auto& set : chain) {
    if (set.empty() || set.size() > kMaxReplicas) {
      throw InvalidPolicy("replica sets hold 1 to 4 switches");
    }
    for (SwitchId s : set) require_switch(t, s);
    block.mbox_chain.push_back(set);
  }
  return block;
}

PolicyBlock add_preference(const Topology& t, PolicyBlock block, SwitchId n1, SwitchId n2) {
  require_iddfs(block, "preference");
  require_switch(t, n1);
  require_switch(t, n2);
  require_degree(t, n1);
  std::uint8_t pref = pref_for_index(neighbor_index(t, n1, n2));
  for (auto& p : block.prefs) {
    if (p.sw == n1) {
      p.pref = pref;
      return block;
    }
  }
  block.prefs.push_back({n1, pref});
  return block;
}

PolicyBlock add_weighted_lb(const Topology& t, PolicyBlock block, SwitchId n,
                            const std::vector<SwitchId>& next_hops,
                            const std::vector<std::uint32_t>& weights) {
  require_iddfs(block, "weighted load-balancing");
  require_switch(t, n);
  require_degree(t, n);
  if (next_hops.empty() || next_hops.size() != weights.size() ||
      next_hops.size() > kMaxPrefHops) {
    throw InvalidPolicy("weighted load-balancing needs 1 to 4 next hops with one weight each");
  }
  for (SwitchId h : next_hops) neighbor_index(t, n, h);
  if (std::accumulate(weights.begin(), weights.end(), std::uint64_t{0}) == 0) {
    throw ZeroWeightSum("weights for switch " + std::to_string(n) + " sum to zero");
  }
  block.wcmp.push_back({n, next_hops, weights});
  return block;
}

std::uint32_t flow_hash32(SwitchId src, SwitchId dst, std::uint32_t flow_id) {
  // murmur3 finalizer over the packed tuple
  std::uint64_t x = (static_cast<std::uint64_t>(src) << 48) |
                    (static_cast<std::uint64_t>(dst) << 32) | flow_id;
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return static_cast<std::uint32_t>(x);
}

std::uint16_t flow_hash(SwitchId src, SwitchId dst, std::uint32_t flow_id) {
  return static_cast<std::uint16_t>(flow_hash32(src, dst, flow_id) >> (32 - kHashBits));
}

std::vector<HashRange> wcmp_ranges(const std::vector<std::uint32_t>& weights,
                                   const std::vector<std::uint8_t>& prefs,
                                   std::uint32_t active_mask) {
  std::uint64_t total = 0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (active_mask & (1U << i)) {
      total += weights[i];
      ++active;
    }
  }
  if (active == 0) return {};
  if (total == 0) throw ZeroWeightSum("active next-hop weights sum to zero");
  constexpr std::uint64_t kSpace = std::uint64_t{1} << kHashBits;
  std::vector<HashRange> out;
  std::uint64_t cum = 0;
  std::uint32_t lo = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(active_mask & (1U << i))) continue;
    cum += weights[i];
    auto hi = static_cast<std::uint32_t>(cum * kSpace / total);
    if (hi > lo) out.push_back({lo, hi, prefs[i], i});
    lo = hi;
  }
  return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> range_to_ternary(std::uint32_t lo,
                                                                      std::uint32_t hi,
                                                                      unsigned bits) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  const std::uint64_t full = (std::uint64_t{1} << bits) - 1;
  std::uint64_t cur = lo;
  while (cur < hi) {
    // largest aligned block starting at cur that fits in [cur, hi)
    std::uint64_t size = cur == 0 ? (std::uint64_t{1} << bits) : (cur & (~cur + 1));
    while (cur + size > hi) size >>= 1;
    out.emplace_back(static_cast<std::uint32_t>(cur),
                     static_cast<std::uint32_t>(full & ~(size - 1)));
    cur += size;
  }
  return out;
}

PolicyBlock PolicySet::for_flow(SwitchId src, SwitchId dst, TraversalMode mode) const {
  PolicyBlock out;
  out.traversal_mode = mode;
  for (const auto& r : rules_) {
    if (!r.flow.matches(src, dst)) continue;
    const auto& b = r.block;
    out.mbox_chain.insert(out.mbox_chain.end(), b.mbox_chain.begin(), b.mbox_chain.end());
    for (const auto& p : b.prefs) {
      bool replaced = false;
      for (auto& q : out.prefs) {
        if (q.sw == p.sw) {
          q.pref = p.pref;
          replaced = true;
        }
      }
      if (!replaced) out.prefs.push_back(p);
    }
    out.wcmp.insert(out.wcmp.end(), b.wcmp.begin(), b.wcmp.end());
  }
  if (mode == TraversalMode::kBfs && (!out.prefs.empty() || !out.wcmp.empty())) {
    throw IncompatibleTraversal("preference and weighted policies require iddfs traversal");
  }
  return out;
}

PolicySet parse_policy_json(const Topology& t, const std::string& text, TraversalMode mode) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("policy JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("policy JSON must be an array");
  PolicySet set;
  try {
    for (const auto& item : doc) {
      PolicyRule rule;
      rule.block.traversal_mode = mode;
      if (item.contains("flow")) {
        rule.flow.src = item["flow"].value("src", SwitchId{0});
        rule.flow.dst = item["flow"].value("dst", SwitchId{0});
      }
      auto type = item.at("type").get<std::string>();
      if (type == "mbox") {
        rule.block = add_mbox_chain(t, rule.block, item.at("chain").get<std::vector<ReplicaSet>>());
      } else if (type == "pref") {
        rule.block = add_preference(t, rule.block, item.at("switch").get<SwitchId>(),
                                    item.at("next").get<SwitchId>());
      } else if (type == "wcmp") {
        rule.block = add_weighted_lb(t, rule.block, item.at("switch").get<SwitchId>(),
                                     item.at("next_hops").get<std::vector<SwitchId>>(),
                                     item.at("weights").get<std::vector<std::uint32_t>>());
      } else {
        throw ParseError("unknown policy type '" + type + "'");
      }
      set.add(std::move(rule));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("policy JSON: ") + e.what());
  }
  return set;
}

PolicySet load_policy_file(const Topology& t, const std::filesystem::path& path,
                           TraversalMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open policy file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_policy_json(t, ss.str(), mode);
}

}  // namespace dproute
