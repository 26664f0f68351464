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

#include "dproute/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "dproute/errors.hpp"

namespace dproute {

namespace {

std::uint32_t fnv1a(std::uint32_t h, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    h ^= static_cast<std::uint8_t>(v >> (8 * i));
    h *= 16777619U;
  }
  return h;
}

}  // namespace

TraversalMode parse_traversal_mode(std::string_view s) {
  if (s == "bfs") return TraversalMode::kBfs;
  if (s == "iddfs") return TraversalMode::kIddfs;
  throw ParseError("unknown traversal mode '" + std::string(s) + "' (expected bfs|iddfs)");
}

Topology::Topology(std::string name, std::vector<SwitchId> switches,
                   std::vector<DirectedLink> links, std::size_t width)
    : name_(std::move(name)), switches_(std::move(switches)), links_(std::move(links)),
      width_(width) {
  std::sort(switches_.begin(), switches_.end());
  if (std::adjacent_find(switches_.begin(), switches_.end()) != switches_.end()) {
    throw InvalidTopology("duplicate switch id");
  }
  if (!switches_.empty() && switches_.front() == kSentinel) {
    throw InvalidTopology("switch id 0 is reserved for the stack sentinel");
  }
  index_.assign(static_cast<std::size_t>(max_switch_id()) + 1, -1);
  for (std::size_t i = 0; i < switches_.size(); ++i) {
    index_[switches_[i]] = static_cast<std::int32_t>(i);
  }

  std::sort(links_.begin(), links_.end(),
            [](const DirectedLink& a, const DirectedLink& b) { return a.id < b.id; });
  link_pos_.assign(width_ + 1, -1);
  std::set<Edge> pairs;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& l = links_[i];
    if (l.id == 0 || l.id > width_) throw InvalidTopology("link id outside vector width");
    if (link_pos_[l.id] != -1) throw InvalidTopology("duplicate link id");
    if (l.from == l.to) {
      throw SelfLoopError("self-loop on switch " + std::to_string(l.from));
    }
    if (!has_switch(l.from) || !has_switch(l.to)) {
      throw InvalidTopology("link " + std::to_string(l.id) + " references an unknown switch");
    }
    if (!pairs.emplace(l.from, l.to).second) {
      throw InvalidTopology("duplicate directed link " + std::to_string(l.from) + "->" +
                            std::to_string(l.to));
    }
    link_pos_[l.id] = static_cast<std::int32_t>(i);
  }
  for (const auto& l : links_) {
    LinkId rev = reverse_link(l.id);
    if (!has_link(rev)) throw InvalidTopology("link " + std::to_string(l.id) + " has no reverse");
    const auto& r = link(rev);
    if (r.from != l.to || r.to != l.from) {
      throw InvalidTopology("link " + std::to_string(rev) + " is not the reverse of " +
                            std::to_string(l.id));
    }
  }

  out_.assign(switches_.size(), {});
  in_mask_.assign(switches_.size(), BitVec(width_));
  out_mask_.assign(switches_.size(), BitVec(width_));
  for (const auto& l : links_) {
    out_[index_of(l.from)].push_back(l);
    out_mask_[index_of(l.from)].set(l.id);
    in_mask_[index_of(l.to)].set(l.id);
  }

  std::uint32_t h = 2166136261U;
  h = fnv1a(h, width_, 4);
  for (const auto& l : links_) {
    h = fnv1a(h, l.id, 4);
    h = fnv1a(h, l.from, 2);
    h = fnv1a(h, l.to, 2);
  }
  fingerprint_ = h;
}

Topology Topology::from_edges(std::string name, std::vector<SwitchId> switches,
                              std::vector<Edge> edges, LinkOrder order) {
  std::vector<Edge> norm;
  std::set<Edge> seen;
  for (auto [a, b] : edges) {
    if (a == b) throw SelfLoopError("self-loop on switch " + std::to_string(a));
    Edge e{std::min(a, b), std::max(a, b)};
    if (seen.insert(e).second) norm.push_back(e);
  }
  if (order == LinkOrder::kSorted) std::sort(norm.begin(), norm.end());
  std::vector<DirectedLink> links;
  links.reserve(norm.size() * 2);
  LinkId id = 1;
  for (auto [lo, hi] : norm) {
    links.push_back({id, lo, hi});
    links.push_back({id + 1, hi, lo});
    id += 2;
  }
  return Topology(std::move(name), std::move(switches), std::move(links), norm.size() * 2);
}

bool Topology::has_switch(SwitchId n) const noexcept {
  return n < index_.size() && index_[n] >= 0;
}

std::size_t Topology::index_of(SwitchId n) const {
  if (!has_switch(n)) throw UnknownSwitch("unknown switch " + std::to_string(n));
  return static_cast<std::size_t>(index_[n]);
}

bool Topology::has_link(LinkId id) const noexcept {
  return id < link_pos_.size() && link_pos_[id] >= 0;
}

const DirectedLink& Topology::link(LinkId id) const {
  if (!has_link(id)) throw UnknownLink("unknown link id " + std::to_string(id));
  return links_[static_cast<std::size_t>(link_pos_[id])];
}

std::optional<LinkId> Topology::find_link(SwitchId from, SwitchId to) const {
  if (!has_switch(from)) return std::nullopt;
  for (const auto& l : out_[index_of(from)]) {
    if (l.to == to) return l.id;
  }
  return std::nullopt;
}

std::span<const DirectedLink> Topology::out_links(SwitchId n) const {
  return out_[index_of(n)];
}

std::vector<SwitchId> Topology::neighbors(SwitchId n) const {
  std::vector<SwitchId> out;
  for (const auto& l : out_links(n)) out.push_back(l.to);
  return out;
}

const BitVec& Topology::edge_mask(SwitchId n, Direction dir) const {
  std::size_t i = index_of(n);
  return dir == Direction::kIncoming ? in_mask_[i] : out_mask_[i];
}

std::vector<Edge> Topology::edges() const {
  std::vector<Edge> out;
  for (const auto& l : links_) {
    if (l.id % 2 == 1) out.emplace_back(l.from, l.to);
  }
  return out;
}

BitVec Topology::link_pair_mask(SwitchId a, SwitchId b) const {
  auto id = find_link(a, b);
  if (!id) {
    throw UnknownLink("no link between " + std::to_string(a) + " and " + std::to_string(b));
  }
  BitVec m(width_);
  m.set(*id);
  m.set(reverse_link(*id));
  return m;
}

bool Topology::is_connected() const {
  if (switches_.empty()) return true;
  std::vector<bool> seen(switches_.size(), false);
  std::deque<SwitchId> queue{switches_.front()};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    SwitchId u = queue.front();
    queue.pop_front();
    for (const auto& l : out_[index_of(u)]) {
      std::size_t j = index_of(l.to);
      if (!seen[j]) {
        seen[j] = true;
        ++reached;
        queue.push_back(l.to);
      }
    }
  }
  return reached == switches_.size();
}

BitVec edge_mask(const Topology& t, SwitchId n, Direction dir) {
  return t.edge_mask(n, dir);
}

}  // namespace dproute
