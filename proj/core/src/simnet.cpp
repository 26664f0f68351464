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


#include "dproute/simnet.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dproute/errors.hpp"
#include "dproute/wire.hpp"
#include "json.hpp"

namespace dproute {

namespace {

bool contains(const ReplicaSet& set, SwitchId s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

Event::Kind parse_kind(const std::string& s) {
  if (s == "down" || s == "link_down") return Event::Kind::kLinkDown;
  if (s == "up" || s == "link_up") return Event::Kind::kLinkUp;
  if (s == "inject") return Event::Kind::kInject;
  throw ParseError("unknown event action '" + s + "'");
}

}  // namespace

EventScript parse_event_script(const std::string& text) {
  EventScript script;
  try {
    auto doc = nlohmann::json::parse(text);
    const auto& events = doc.is_array() ? doc : doc.at("events");
    std::uint32_t order = 0;
    for (const auto& e : events) {
      Event ev;
      ev.seq = e.value("seq", order);
      ev.kind = parse_kind(e.at("action").get<std::string>());
      if (ev.kind == Event::Kind::kInject) {
        ev.src = e.at("src").get<SwitchId>();
        ev.dst = e.at("dst").get<SwitchId>();
        ev.flow_id = e.value("flow", 0U);
        if (e.contains("mode")) ev.mode = parse_traversal_mode(e.at("mode").get<std::string>());
        if (e.contains("chain")) ev.chain = e.at("chain").get<std::vector<ReplicaSet>>();
      } else {
        auto link = e.at("link").get<std::vector<SwitchId>>();
        if (link.size() != 2) throw ParseError("event link needs two endpoints");
        ev.link = {link[0], link[1]};
      }
      script.events.push_back(std::move(ev));
      ++order;
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("event script: ") + ex.what());
  }
  std::stable_sort(script.events.begin(), script.events.end(),
                   [](const Event& a, const Event& b) { return a.seq < b.seq; });
  return script;
}

EventScript load_event_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_event_script(ss.str());
}

Network::Network(std::shared_ptr<const Topology> base,
                 std::shared_ptr<const HierarchyLayout> layout,
                 std::shared_ptr<const RuleSet> rules, NetworkOptions options)
    : base_(std::move(base)),
      layout_(std::move(layout)),
      rules_(std::move(rules)),
      options_(options),
      down_(base_->width()),
      wcmp_cache_(std::make_shared<WcmpCache>()) {}

const Topology& Network::rule_topology() const noexcept {
  return layout_ ? layout_->rule_topology() : *base_;
}

ActionEnv Network::env() const noexcept { return {&rule_topology(), layout_.get()}; }

void Network::link_down(SwitchId a, SwitchId b) {
  auto id = base_->find_link(a, b);
  if (!id) throw UnknownLink("no link " + std::to_string(a) + "-" + std::to_string(b));
  down_.set(*id);
  down_.set(reverse_link(*id));
}

void Network::link_up(SwitchId a, SwitchId b) {
  auto id = base_->find_link(a, b);
  if (!id) throw UnknownLink("no link " + std::to_string(a) + "-" + std::to_string(b));
  down_.reset(*id);
  down_.reset(reverse_link(*id));
}

void Network::set_down_links(const BitVec& down) {
  if (down.width() != base_->width()) throw WidthMismatch("down-link vector width");
  down_ = down;
}

void Network::restore_all() { down_.clear(); }

std::size_t Network::up_link_count() const noexcept {
  return base_->links().size() - down_.count();
}

LocalLinkState Network::local(SwitchId s) const {
  return local_state(*base_, s, down_, rule_topology().width());
}

Pipeline Network::pipeline_for(SwitchId s) const {
  auto it = rules_->switches.find(s);
  if (it == rules_->switches.end()) throw MissingRules("no rules on switch " + std::to_string(s));
  const Table* hier = it->second.hierarchy ? &*it->second.hierarchy : nullptr;
  return Pipeline(rules_->bfs.get(), rules_->iddfs.get(), hier, env(), options_.pipeline,
                  rules_->fingerprint);
}

std::shared_ptr<const Table> Network::wcmp_table(const WcmpShape& shape) const {
  std::lock_guard lock(wcmp_cache_->mu);
  auto& slot = wcmp_cache_->tables[shape];
  if (!slot) slot = std::make_shared<const Table>(gen_wcmp_pre_rules(shape));
  return slot;
}

void Network::resolve_prefs(PacketHeader& h, SwitchId) const {
  h.resolved_prefs = h.policy.prefs;
  const Topology& rt = rule_topology();
  for (const auto& entry : h.policy.wcmp) {
    std::uint32_t active = 0;
    for (std::size_t i = 0; i < entry.next_hops.size(); ++i) {
      auto id = rt.find_link(entry.sw, entry.next_hops[i]);
      if (id && !h.fail.test(*id)) active |= 1U << i;
    }
    if (active == 0) continue;
    auto table = wcmp_table(wcmp_shape(rt, entry));
    MatchInput in;
    in.scalar[static_cast<std::size_t>(Field::kActiveMask)] = active;
    in.scalar[static_cast<std::size_t>(Field::kHash)] = flow_hash(h.src, h.final_dst, h.flow_id);
    ActionSpec a = table->lookup(in);
    if (a.kind != ActionKind::kWcmpMap) continue;
    a.n = entry.sw;
    apply_action_inplace(a, h, env());
  }
}

PacketHeader Network::hierarchical_fallback(PacketHeader h) const {
  h.flat = true;
  h.hierarchy = 0;
  h.domain_valid = false;
  h.domain_path.clear();
  h.path.clear();
  h.path_cursor = 0;
  h.path_base = 0;
  const BitVec* scope = layout_ ? &layout_->flat_scope_mask() : nullptr;
  reset_traversal(h, rule_topology(), h.home, chain_target(h, h.target_cursor),
                  scoped_visited(h, env(), scope));
  return h;
}

void Network::recompute(PacketHeader& h, SwitchId s, TraceRecord& tr) const {
  h.home = s;
  h.curr = s;
  h.path.clear();
  h.path_cursor = 0;
  h.path_base = 0;
  resolve_prefs(h, s);
  h.target_cursor = h.policy.chain_cursor;
  // middlebox chains are routed on the flat scope even in domain networks
  const bool hier = layout_ && !h.flat && h.policy.mbox_chain.empty();
  if (hier) {
    h.dst.clear();
    h.hierarchy = 0;
    h.exhausted = false;
    h.origin = s;
  } else {
    const BitVec* scope = layout_ ? &layout_->flat_scope_mask() : nullptr;
    reset_traversal(h, rule_topology(), s, chain_target(h, h.target_cursor),
                    scoped_visited(h, env(), scope));
  }
  ++tr.recomputations;
  Pipeline p = pipeline_for(s);
  auto account = [&](ExecOutcome& out) {
    tr.per_switch_recirc[s] += out.recirculations;
    tr.per_switch_applications[s] += out.applications;
    for (auto& f : out.fired) tr.fired.push_back({s, f});
  };
  ExecOutcome out = p.run_to_completion(std::move(h));
  account(out);
  if (out.verdict == Verdict::kDrop && out.drop == DropReason::kUnreachable && hier) {
    // one extra pass to restart the search on the flat scope
    ++tr.fallbacks;
    tr.per_switch_recirc[s] += 1;
    out = p.run_to_completion(hierarchical_fallback(std::move(out.header)));
    account(out);
  }
  h = std::move(out.header);
  if (out.verdict == Verdict::kDrop) tr.drop_reason = out.drop;
}

TraceRecord Network::run_packet(SwitchId src, SwitchId dst, const PolicyBlock& policy,
                                TraversalMode mode, std::uint32_t flow_id) const {
  const Topology& rt = rule_topology();
  if (!base_->has_switch(src)) throw UnknownSwitch("unknown switch " + std::to_string(src));
  if (!base_->has_switch(dst)) throw UnknownSwitch("unknown switch " + std::to_string(dst));
  TraceRecord tr;
  tr.hops.push_back(src);
  PacketHeader h =
      init_header(rt, src, dst, BitVec(rt.width()), policy, mode, options_.path_capacity);
  h.flow_id = flow_id;
  h.policy.traversal_mode = mode;
  h.policy.chain_cursor = 0;
  const std::size_t hop_limit = options_.hop_limit_factor * base_->switch_count();
  SwitchId s = src;
  bool recomputed = false;
  for (;;) {
    LocalLinkState loc = local(s);
    h.curr = s;
    ingress_fcp(h, loc);
    auto& chain = h.policy.mbox_chain;
    while (h.policy.chain_cursor < chain.size() && contains(chain[h.policy.chain_cursor], s)) {
      ++h.policy.chain_cursor;
    }
    const Table& fwd = rules_->switches.at(s).forwarding;
    auto idx = fwd.match(forwarding_input(h, s, loc, rt, layout_.get()));
    const ActionSpec& a = idx ? fwd.rules()[*idx].action : fwd.default_action();
    if (options_.pipeline.record_fired) {
      tr.fired.push_back({s, FiredRule{0, 0, &fwd, idx ? static_cast<std::int64_t>(*idx) : -1,
                                       a.kind, s, a.n}});
    }
    if (a.kind == ActionKind::kDeliver) {
      tr.delivered = true;
      break;
    }
    if (a.kind == ActionKind::kForward) {
      auto next = physical_next_hop(s, a.n, loc, rt, layout_.get());
      if (!next) throw MissingRules("forward over a failed link at " + std::to_string(s));
      if (tr.hops.size() > hop_limit) {
        tr.drop_reason = DropReason::kHopLimit;
        break;
      }
      ++h.path_cursor;
      if (options_.wire_between_switches) {
        h = decode(encode(h, rules_->fingerprint, WireScope::kInterSwitch), rules_->fingerprint)
                .header;
      }
      s = *next;
      tr.hops.push_back(s);
      recomputed = false;
      continue;
    }
    if (recomputed) {
      // fresh route gives nothing to follow: nothing left to try here
      tr.drop_reason = DropReason::kUnreachable;
      break;
    }
    recompute(h, s, tr);
    if (tr.drop_reason != DropReason::kNone) break;
    recomputed = true;
  }
  for (const auto& [sw, n] : tr.per_switch_recirc) tr.total_recirc += n;
  tr.final_header = std::move(h);
  return tr;
}

std::vector<TraceRecord> Network::run_script(const EventScript& script, TraversalMode mode) {
  std::vector<TraceRecord> out;
  for (const auto& ev : script.events) {
    switch (ev.kind) {
      case Event::Kind::kLinkDown:
        link_down(ev.link.first, ev.link.second);
        break;
      case Event::Kind::kLinkUp:
        link_up(ev.link.first, ev.link.second);
        break;
      case Event::Kind::kInject: {
        PolicyBlock policy;
        if (!ev.chain.empty()) policy = add_mbox_chain(*base_, policy, ev.chain);
        out.push_back(run_packet(ev.src, ev.dst, policy, ev.mode.value_or(mode), ev.flow_id));
        break;
      }
    }
  }
  return out;
}

std::string trace_to_json(const TraceRecord& tr) {
  nlohmann::ordered_json j;
  j["src"] = tr.hops.empty() ? 0 : tr.hops.front();
  j["dst"] = tr.final_header.final_dst;
  j["hops"] = tr.hops;
  j["delivered"] = tr.delivered;
  j["drop"] = tr.drop_reason == DropReason::kNone ? nlohmann::ordered_json()
                                                   : nlohmann::ordered_json(to_string(tr.drop_reason));
  j["total_recirc"] = tr.total_recirc;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [s, n] : tr.per_switch_recirc) per[std::to_string(s)] = n;
  j["per_switch_recirc"] = std::move(per);
  j["recomputations"] = tr.recomputations;
  j["fallbacks"] = tr.fallbacks;
  return j.dump();
}

std::string format_hops(const std::vector<SwitchId>& hops) {
  std::string out;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    if (i) out += " -> ";
    out += std::to_string(hops[i]);
  }
  return out;
}

Network build_network(std::shared_ptr<const Topology> t, std::shared_ptr<const RuleSet> rules,
                      std::shared_ptr<const HierarchyLayout> layout, NetworkOptions options) {
  if (!t || !rules) throw MissingRules("network needs a topology and rules");
  for (SwitchId s : t->switches()) {
    if (!rules->switches.contains(s)) {
      throw MissingRules("no rules for switch " + std::to_string(s));
    }
  }
  const Topology& rt = layout ? layout->rule_topology() : *t;
  if (rules->fingerprint != rt.fingerprint()) {
    throw MissingRules("rules were compiled for a different topology");
  }
  if (rules->hierarchical != (layout != nullptr)) {
    throw MissingRules("rule set and network disagree on domains");
  }
  return Network(std::move(t), std::move(layout), std::move(rules), options);
}

Network make_network(const Topology& t, std::optional<DomainPartition> partition,
                     NetworkOptions options, RuleGenOptions rule_options) {
  auto base = std::make_shared<const Topology>(t);
  std::shared_ptr<const HierarchyLayout> layout;
  if (partition) layout = std::make_shared<const HierarchyLayout>(t, std::move(*partition));
  auto rules = std::make_shared<const RuleSet>(compile_rules(*base, layout.get(), rule_options));
  return build_network(base, rules, layout, options);
}

}  // namespace dproute
