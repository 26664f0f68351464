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

#include "dproute/errors.hpp"
#include "dproute/hierarchy.hpp"
#include "dproute/pipeline.hpp"

namespace dproute {

namespace {

// Restores (curr, path, len) from the top of the active BFS stack. The
// sentinel is never removed: reaching it only sets curr to 0.
void pop_bfs(PacketHeader& h) {
  auto& stack = h.bfs_stacks[h.stack_sel];
  if (stack.empty()) throw StackUnderflow("BFS stack lost its sentinel");
  if (stack.back().sw == kSentinel) {
    h.curr = kSentinel;
    return;
  }
  BfsEntry top = std::move(stack.back());
  stack.pop_back();
  h.curr = top.sw;
  h.len = top.len;
  h.path = std::move(top.path);
}

const Topology& topo_of(const ActionEnv& env) {
  if (env.topo == nullptr) throw MissingRules("action needs the rule topology");
  return *env.topo;
}

const HierarchyLayout& layout_of(const ActionEnv& env) {
  if (env.layout == nullptr) throw MissingRules("hierarchy action on a flat network");
  return *env.layout;
}

}  // namespace

BitVec scoped_visited(const PacketHeader& h, const ActionEnv& env, const BitVec* scope) {
  BitVec v = env.layout ? env.layout->map_failures(h.fail) : h.fail;
  if (scope && scope->width() > 0) v |= *scope;
  return v;
}

void apply_action_inplace(const ActionSpec& spec, PacketHeader& h, const ActionEnv& env) {
  switch (spec.kind) {
    case ActionKind::kNoop:
    case ActionKind::kForward:
    case ActionKind::kDeliver:
    case ActionKind::kDivert:
      return;

    case ActionKind::kPushNeighbor: {
      BfsEntry e{spec.n, static_cast<std::int16_t>(h.len + 1), h.path};
      e.path.push(spec.n);
      h.bfs_stacks[h.stack_sel ^ 1].push_back(std::move(e));
      h.visited |= spec.mask;
      ++h.explored;
      return;
    }
    case ActionKind::kPopStack:
      pop_bfs(h);
      return;
    case ActionKind::kChangeStack:
      h.stack_sel ^= 1;
      pop_bfs(h);
      return;

    case ActionKind::kGotoNeighbor:
      h.dfs_stack.push_back(h.curr);
      h.curr = spec.n;
      h.visited |= spec.mask;
      ++h.len;
      h.path.push(spec.n);
      ++h.explored;
      return;
    case ActionKind::kBacktrack: {
      if (h.dfs_stack.empty()) throw StackUnderflow("DFS stack lost its sentinel");
      h.curr = h.dfs_stack.back();
      if (h.curr != kSentinel) h.dfs_stack.pop_back();
      --h.len;
      if (h.path.length() > h.path_base) h.path.pop_back();
      return;
    }
    case ActionKind::kIncreaseLength:
      h.max_len = static_cast<std::uint16_t>(h.max_len << 1);
      if (h.max_len > h.max_len_cap) {
        h.exhausted = true;
        return;
      }
      h.curr = h.origin;
      h.visited = h.visited_init;
      h.len = 0;
      h.path.truncate(h.path_base);
      h.dfs_stack.assign(1, kSentinel);
      return;
    case ActionKind::kUnreachable:
      h.exhausted = true;
      return;

    case ActionKind::kFcpUpdate:
      h.fail |= spec.mask;
      return;

    case ActionKind::kNextTarget: {
      ++h.target_cursor;
      h.path_base = h.path.length();
      const BitVec* scope = env.layout ? &env.layout->flat_scope_mask() : nullptr;
      reset_traversal(h, topo_of(env), h.curr, chain_target(h, h.target_cursor),
                      scoped_visited(h, env, scope));
      return;
    }

    case ActionKind::kDomainCommit: {
      Path dp(h.domain_path.capacity());
      dp.push(h.origin);
      for (SwitchId d : h.path.hops()) dp.push(d);
      h.domain_path = std::move(dp);
      h.domain_valid = true;
      h.domain_cursor = 0;
      h.hierarchy = 0;
      h.curr = h.home;
      h.dst.clear();
      h.path.clear();
      h.path_base = 0;
      return;
    }
    case ActionKind::kDomainEnter: {
      const auto& layout = layout_of(env);
      DomainId here = layout.partition().domain(h.home);
      auto hops = h.domain_path.hops();
      for (std::size_t i = 0; i < hops.size(); ++i) {
        if (hops[i] == here) h.domain_cursor = static_cast<std::uint8_t>(i);
      }
      DstSet target;
      target.push_back(spec.n == 0 ? h.final_dst : spec.n);
      h.hierarchy = 0;
      h.path.clear();
      h.path_base = 0;
      reset_traversal(h, topo_of(env), h.home, target, scoped_visited(h, env, &spec.mask));
      return;
    }
    case ActionKind::kDomainReroute: {
      DstSet target;
      target.push_back(spec.m);
      h.hierarchy = 1;
      h.domain_valid = false;
      h.domain_path.clear();
      h.path.clear();
      h.path_base = 0;
      reset_traversal(h, topo_of(env), spec.n, target, scoped_visited(h, env, &spec.mask));
      return;
    }
    case ActionKind::kFlatRoute:
      h.flat = true;
      h.hierarchy = 0;
      h.path.clear();
      h.path_base = 0;
      reset_traversal(h, topo_of(env), h.home, chain_target(h, h.target_cursor),
                      scoped_visited(h, env, &spec.mask));
      return;

    case ActionKind::kWcmpMap:
      for (auto& p : h.resolved_prefs) {
        if (p.sw == spec.n) {
          p.pref = spec.value;
          return;
        }
      }
      h.resolved_prefs.push_back({spec.n, spec.value});
      return;
  }
}

PacketHeader apply_action(const ActionSpec& spec, PacketHeader h, const ActionEnv& env) {
  apply_action_inplace(spec, h, env);
  return h;
}

}  // namespace dproute
