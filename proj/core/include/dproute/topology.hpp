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

#ifndef DPROUTE_TOPOLOGY_HPP_
#define DPROUTE_TOPOLOGY_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dproute/bitvec.hpp"
#include "dproute/types.hpp"

namespace dproute {

struct DirectedLink {
  LinkId id = 0;
  SwitchId from = 0;
  SwitchId to = 0;

  friend bool operator==(const DirectedLink&, const DirectedLink&) = default;
};

using Edge = std::pair<SwitchId, SwitchId>;

// How bidirectional links are numbered when a topology is built from an edge
// list. kFileOrder keeps the order of the source file (the numbering used in
// the rule examples of the diamond fixture); kSorted orders links by
// (min endpoint, max endpoint).
enum class LinkOrder : std::uint8_t { kFileOrder, kSorted };

enum class Direction : std::uint8_t { kIncoming, kOutgoing };

// Immutable switch graph with directed link ids. Ids need not be contiguous
// (augmented domain graphs use a sparse subset of a larger id space) but
// every id is <= width() and each link's reverse is present.
class Topology {
 public:
  Topology() = default;
  Topology(std::string name, std::vector<SwitchId> switches,
           std::vector<DirectedLink> links, std::size_t width);

  // Numbers `edges` as links 2k-1 (lower -> higher endpoint) and 2k.
  // Duplicate edges are dropped (first occurrence wins).
  static Topology from_edges(std::string name, std::vector<SwitchId> switches,
                             std::vector<Edge> edges,
                             LinkOrder order = LinkOrder::kFileOrder);

  const std::string& name() const noexcept { return name_; }
  std::span<const SwitchId> switches() const noexcept { return switches_; }
  std::span<const DirectedLink> links() const noexcept { return links_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t switch_count() const noexcept { return switches_.size(); }
  std::size_t bidirectional_link_count() const noexcept { return links_.size() / 2; }
  SwitchId max_switch_id() const noexcept {
    return switches_.empty() ? 0 : switches_.back();
  }

  bool has_switch(SwitchId n) const noexcept;
  const DirectedLink& link(LinkId id) const;
  bool has_link(LinkId id) const noexcept;
  std::optional<LinkId> find_link(SwitchId from, SwitchId to) const;

  // Outgoing links of n in ascending id order (the exploration order).
  std::span<const DirectedLink> out_links(SwitchId n) const;
  std::vector<SwitchId> neighbors(SwitchId n) const;
  std::size_t degree(SwitchId n) const { return out_links(n).size(); }

  const BitVec& edge_mask(SwitchId n, Direction dir) const;

  // Bidirectional links as (lower, higher) pairs in id order.
  std::vector<Edge> edges() const;

  // Both directed ids of the link between a and b.
  BitVec link_pair_mask(SwitchId a, SwitchId b) const;

  bool is_connected() const;

  // FNV-1a over the width and the link table; stamped into packet headers.
  std::uint32_t fingerprint() const noexcept { return fingerprint_; }

  // Optional human labels (GraphML node labels), keyed by switch id.
  const std::map<SwitchId, std::string>& labels() const noexcept { return labels_; }
  void set_labels(std::map<SwitchId, std::string> labels) { labels_ = std::move(labels); }

 private:
  std::size_t index_of(SwitchId n) const;

  std::string name_;
  std::vector<SwitchId> switches_;
  std::vector<DirectedLink> links_;  // sorted by id
  std::size_t width_ = 0;
  std::vector<std::int32_t> index_;  // SwitchId -> position in switches_, -1 if absent
  std::vector<std::int32_t> link_pos_;  // LinkId -> position in links_, -1 if absent
  std::vector<std::vector<DirectedLink>> out_;
  std::vector<BitVec> in_mask_;
  std::vector<BitVec> out_mask_;
  std::map<SwitchId, std::string> labels_;
  std::uint32_t fingerprint_ = 0;
};

// Free-function form of Topology::edge_mask; throws UnknownSwitch.
BitVec edge_mask(const Topology& t, SwitchId n, Direction dir);

enum class TopologyFormat : std::uint8_t { kAuto, kGraphml, kJson };

// Loads a GraphML (Topology Zoo dialect) or JSON topology. GraphML nodes are
// renumbered 1..N in document order; their labels are kept on the topology.
// Throws ParseError, DisconnectedError, SelfLoopError.
Topology load_topology(const std::filesystem::path& path,
                       TopologyFormat format = TopologyFormat::kAuto,
                       LinkOrder order = LinkOrder::kFileOrder);

Topology parse_topology_json(const std::string& text, const std::string& default_name,
                             LinkOrder order = LinkOrder::kFileOrder);
Topology parse_topology_graphml(const std::string& text, const std::string& default_name,
                                LinkOrder order = LinkOrder::kFileOrder);

// {"name": ..., "switches": [...], "links": [[a,b], ...]} in link-id order.
std::string topology_to_json(const Topology& t);

// Sidecar mapping {"<switch id>": "<label>"}.
std::string label_sidecar_json(const Topology& t);
void write_label_sidecar(const Topology& t, const std::filesystem::path& path);

}  // namespace dproute

#endif  // DPROUTE_TOPOLOGY_HPP_
