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


#ifndef DPROUTE_SIMNET_HPP_
#define DPROUTE_SIMNET_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dproute/fcp.hpp"
#include "dproute/header.hpp"
#include "dproute/hierarchy.hpp"
#include "dproute/pipeline.hpp"
#include "dproute/policy.hpp"
#include "dproute/ruleplane.hpp"
#include "dproute/topology.hpp"

namespace dproute {

struct NetworkOptions {
  PipelineConfig pipeline;
  std::uint8_t path_capacity = kDefaultPathCapacity;
  unsigned hop_limit_factor = 4;  // drop after factor * |switches| hops
  bool wire_between_switches = true;
};

struct SwitchFired {
  SwitchId sw = 0;
  FiredRule rule;
};

struct TraceRecord {
  std::vector<SwitchId> hops;  // starts with src
  std::map<SwitchId, unsigned> per_switch_recirc;
  std::map<SwitchId, unsigned> per_switch_applications;  // traversal-side slots
  unsigned total_recirc = 0;
  unsigned recomputations = 0;
  unsigned fallbacks = 0;
  bool delivered = false;
  DropReason drop_reason = DropReason::kNone;
  PacketHeader final_header;
  std::vector<SwitchFired> fired;  // only with PipelineConfig::record_fired

  std::size_t hop_count() const noexcept { return hops.empty() ? 0 : hops.size() - 1; }
};

struct Event {
  enum class Kind : std::uint8_t { kLinkDown, kLinkUp, kInject };
  std::uint32_t seq = 0;
  Kind kind = Kind::kInject;
  Edge link{0, 0};
  SwitchId src = 0;
  SwitchId dst = 0;
  std::uint32_t flow_id = 0;
  std::optional<TraversalMode> mode;
  std::vector<ReplicaSet> chain;  // middlebox chain for the injected flow
};

struct EventScript {
  std::vector<Event> events;
};

// {"events": [{"seq": 1, "action": "down", "link": [1, 2]},
//             {"seq": 2, "action": "inject", "src": 1, "dst": 4, "flow": 0,
//              "mode": "bfs", "chain": [[3]]}, ...]}
// Events run in ascending seq order (file order breaks ties).
EventScript parse_event_script(const std::string& text);
EventScript load_event_script(const std::filesystem::path& path);

// Switches with installed rules plus network-wide link state. Copies share
// the immutable topology and rules; link state is per copy.
class Network {
 public:
  Network(std::shared_ptr<const Topology> base, std::shared_ptr<const HierarchyLayout> layout,
          std::shared_ptr<const RuleSet> rules, NetworkOptions options);

  const Topology& topology() const noexcept { return *base_; }
  const Topology& rule_topology() const noexcept;
  const HierarchyLayout* layout() const noexcept { return layout_.get(); }
  const RuleSet& rules() const noexcept { return *rules_; }
  const NetworkOptions& options() const noexcept { return options_; }
  void set_options(const NetworkOptions& options) { options_ = options; }
  std::size_t switch_count() const noexcept { return base_->switch_count(); }
  bool hierarchical() const noexcept { return layout_ != nullptr; }

  // Both directions at once. Throws UnknownLink. Idempotent.
  void link_down(SwitchId a, SwitchId b);
  void link_up(SwitchId a, SwitchId b);
  void set_down_links(const BitVec& down);  // base width
  void restore_all();
  const BitVec& down_links() const noexcept { return down_; }
  std::size_t up_link_count() const noexcept;
  LocalLinkState local(SwitchId s) const;

  TraceRecord run_packet(SwitchId src, SwitchId dst, const PolicyBlock& policy = {},
                         TraversalMode mode = TraversalMode::kIddfs,
                         std::uint32_t flow_id = 0) const;

  // Injections without an explicit mode use `mode`. Throws UnknownLink.
  std::vector<TraceRecord> run_script(const EventScript& script,
                                      TraversalMode mode = TraversalMode::kIddfs);

  Pipeline pipeline_for(SwitchId s) const;

  // Reset for a flat traversal over the whole topology from h.home.
  PacketHeader hierarchical_fallback(PacketHeader h) const;

  // Preprocessing table for a WCMP shape (cached).
  std::shared_ptr<const Table> wcmp_table(const WcmpShape& shape) const;

 private:
  ActionEnv env() const noexcept;
  void resolve_prefs(PacketHeader& h, SwitchId s) const;
  void recompute(PacketHeader& h, SwitchId s, TraceRecord& tr) const;

  std::shared_ptr<const Topology> base_;
  std::shared_ptr<const HierarchyLayout> layout_;
  std::shared_ptr<const RuleSet> rules_;
  NetworkOptions options_;
  BitVec down_;

  struct WcmpCache {
    std::mutex mu;
    std::map<WcmpShape, std::shared_ptr<const Table>> tables;
  };
  std::shared_ptr<WcmpCache> wcmp_cache_;
};

// One JSON object per trace: hops, verdict, drop reason and recirculations.
std::string trace_to_json(const TraceRecord& tr);
// Single-line "1 -> 2 -> 4" form of the hop list.
std::string format_hops(const std::vector<SwitchId>& hops);

// Installs `rules` on every switch of t. Throws MissingRules when a switch
// has no rules or the rules were compiled for another topology.
Network build_network(std::shared_ptr<const Topology> t, std::shared_ptr<const RuleSet> rules,
                      std::shared_ptr<const HierarchyLayout> layout = nullptr,
                      NetworkOptions options = {});

// Convenience: compile and install in one go.
Network make_network(const Topology& t, std::optional<DomainPartition> partition = std::nullopt,
                     NetworkOptions options = {}, RuleGenOptions rule_options = {});

}  // namespace dproute

#endif  // DPROUTE_SIMNET_HPP_
