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


#include "dproute/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "dproute/errors.hpp"

namespace dproute {

namespace {

using Adjacency = std::map<SwitchId, std::vector<SwitchId>>;

Edge norm(SwitchId a, SwitchId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

Adjacency adjacency(const Topology& t, const FailedLinks& failed) {
  Adjacency adj;
  for (SwitchId s : t.switches()) adj[s];
  FailedLinks down;
  for (auto [a, b] : failed) down.insert(norm(a, b));
  for (auto [a, b] : t.edges()) {
    if (down.contains(norm(a, b))) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& [s, v] : adj) std::sort(v.begin(), v.end());
  return adj;
}

OracleResult bfs(const Adjacency& adj, SwitchId src, SwitchId dst) {
  if (!adj.contains(src)) throw UnknownSwitch("unknown switch " + std::to_string(src));
  if (!adj.contains(dst)) throw UnknownSwitch("unknown switch " + std::to_string(dst));
  std::map<SwitchId, SwitchId> parent{{src, src}};
  std::deque<SwitchId> q{src};
  while (!q.empty()) {
    SwitchId u = q.front();
    q.pop_front();
    if (u == dst) break;
    for (SwitchId v : adj.at(u)) {
      if (parent.emplace(v, u).second) q.push_back(v);
    }
  }
  OracleResult r;
  if (!parent.contains(dst)) return r;
  std::vector<SwitchId> path{dst};
  while (path.back() != src) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  r.reachable = true;
  r.shortest_len = path.size() - 1;
  r.a_shortest_path = std::move(path);
  return r;
}

}  // namespace

FailedLinks failed_links_from_bits(const Topology& t, const BitVec& fail) {
  FailedLinks out;
  for (LinkId id : fail.set_bits()) {
    if (!t.has_link(id)) continue;
    const auto& l = t.link(id);
    out.insert(norm(l.from, l.to));
  }
  return out;
}

OracleResult shortest_active_path(const Topology& t, const FailedLinks& failed, SwitchId src,
                                  SwitchId dst) {
  return bfs(adjacency(t, failed), src, dst);
}

OracleResult compliant_shortest_path(const Topology& t, const FailedLinks& failed, SwitchId src,
                                     SwitchId dst, const std::vector<ReplicaSet>& chain) {
  Adjacency adj = adjacency(t, failed);
  OracleResult best;
  std::vector<std::size_t> choice(chain.size(), 0);
  for (const auto& set : chain) {
    if (set.empty()) return best;
  }
  for (;;) {
    std::vector<SwitchId> stops{src};
    for (std::size_t i = 0; i < chain.size(); ++i) stops.push_back(chain[i][choice[i]]);
    stops.push_back(dst);
    std::vector<SwitchId> path{src};
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
      auto leg = bfs(adj, stops[i], stops[i + 1]);
      if (!leg.reachable) {
        ok = false;
        break;
      }
      path.insert(path.end(), leg.a_shortest_path->begin() + 1, leg.a_shortest_path->end());
    }
    if (ok && (!best.reachable || path.size() - 1 < *best.shortest_len)) {
      best.reachable = true;
      best.shortest_len = path.size() - 1;
      best.a_shortest_path = std::move(path);
    }
    // odometer over replica choices
    std::size_t i = 0;
    while (i < chain.size() && ++choice[i] == chain[i].size()) choice[i++] = 0;
    if (i == chain.size()) break;
  }
  return best;
}

std::vector<int> active_components(const Topology& t, const FailedLinks& failed) {
  Adjacency adj = adjacency(t, failed);
  std::map<SwitchId, int> comp;
  int next = 0;
  for (SwitchId s : t.switches()) {
    if (comp.contains(s)) continue;
    std::deque<SwitchId> q{s};
    comp[s] = next;
    while (!q.empty()) {
      SwitchId u = q.front();
      q.pop_front();
      for (SwitchId v : adj.at(u)) {
        if (comp.emplace(v, next).second) q.push_back(v);
      }
    }
    ++next;
  }
  std::vector<int> out;
  for (SwitchId s : t.switches()) out.push_back(comp.at(s));
  return out;
}

std::optional<double> stretch(std::size_t hops, const OracleResult& oracle, bool delivered) {
  if (!delivered || !oracle.reachable) return std::nullopt;
  if (*oracle.shortest_len == 0) return hops == 0 ? std::optional<double>(1.0) : std::nullopt;
  return static_cast<double>(hops) / static_cast<double>(*oracle.shortest_len);
}

}  // namespace dproute
