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


#include "dproute/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <thread>

#include "dproute/errors.hpp"
#include "dproute/hierarchy.hpp"
#include "dproute/rng.hpp"
#include "json.hpp"

namespace dproute {

namespace {

std::vector<std::pair<SwitchId, SwitchId>> all_pairs(const Topology& t) {
  std::vector<std::pair<SwitchId, SwitchId>> out;
  for (SwitchId a : t.switches()) {
    for (SwitchId b : t.switches()) {
      if (a != b) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<std::pair<double, double>> cdf(std::vector<double> v) {
  std::vector<std::pair<double, double>> out;
  if (v.empty()) return out;
  std::sort(v.begin(), v.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    out.emplace_back(v[i], static_cast<double>(i + 1) / static_cast<double>(v.size()));
  }
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::vector<MetricsRow> run_one(const Network& proto, const Scenario& sc,
                                const std::vector<std::pair<SwitchId, SwitchId>>& pairs,
                                const ExperimentConfig& config) {
  Network net = proto;
  net.restore_all();
  FailedLinks failed;
  for (auto [a, b] : sc.failed) {
    net.link_down(a, b);
    failed.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<MetricsRow> rows;
  rows.reserve(pairs.size());
  for (auto [src, dst] : pairs) {
    PolicyBlock policy = config.policy.for_flow(src, dst, config.mode);
    TraceRecord tr = net.run_packet(src, dst, policy, config.mode);
    OracleResult o = policy.mbox_chain.empty()
                         ? shortest_active_path(net.topology(), failed, src, dst)
                         : compliant_shortest_path(net.topology(), failed, src, dst,
                                                   policy.mbox_chain);
    MetricsRow r;
    r.scenario = sc.id;
    r.src = src;
    r.dst = dst;
    r.delivered = tr.delivered;
    r.oracle_reachable = o.reachable;
    r.total_recirc = tr.total_recirc;
    r.hops = tr.hop_count();
    r.oracle_len = o.shortest_len;
    r.stretch = stretch(r.hops, o, tr.delivered);
    r.drop = tr.drop_reason;
    r.fallbacks = tr.fallbacks;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

std::vector<Scenario> failure_scenarios(const Topology& t, unsigned k, unsigned count,
                                        std::uint64_t seed) {
  if (k == 0) return {Scenario{0, {}}};
  auto edges = t.edges();
  if (k > edges.size()) throw InvalidTopology("more failures than links");
  std::vector<Scenario> out;
  for (unsigned i = 0; i < count; ++i) {
    Rng rng({seed, k, i});
    Scenario sc{i, {}};
    for (std::size_t idx : rng.sample(edges.size(), k)) sc.failed.push_back(edges[idx]);
    std::sort(sc.failed.begin(), sc.failed.end());
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<MetricsRow> run_scenarios(const Network& net, const std::vector<Scenario>& scenarios,
                                      const ExperimentConfig& config) {
  auto pairs = config.pairs.empty() ? all_pairs(net.topology()) : config.pairs;
  std::vector<std::vector<MetricsRow>> parts(scenarios.size());
  unsigned threads = std::max(1U, std::min<unsigned>(config.threads, scenarios.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      parts[i] = run_one(net, scenarios[i], pairs, config);
    }
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < scenarios.size(); i += threads) {
          parts[i] = run_one(net, scenarios[i], pairs, config);
        }
      });
    }
  }
  std::vector<MetricsRow> rows;
  for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    return std::tie(a.scenario, a.src, a.dst) < std::tie(b.scenario, b.src, b.dst);
  });
  return rows;
}

ExperimentResult run_experiment(const Topology& t, const ExperimentConfig& config) {
  NetworkOptions opts;
  opts.pipeline.stages_per_pass = config.stages_per_pass;
  opts.pipeline.recirc_limit = config.recirc_limit;
  opts.path_capacity = config.path_capacity;
  std::optional<DomainPartition> part;
  if (config.domains) part = partition_domains(t, *config.domains, config.seed);
  Network net = make_network(t, std::move(part), opts);
  ExperimentResult res;
  res.rows = run_scenarios(net, failure_scenarios(t, config.k, config.scenarios, config.seed),
                           config);
  res.summary = summarize(res.rows);
  return res;
}

ExperimentSummary summarize(const std::vector<MetricsRow>& rows) {
  ExperimentSummary s;
  s.rows = rows.size();
  std::vector<double> recircs, stretches;
  double recirc_sum = 0, stretch_sum = 0;
  std::size_t zero = 0, below2 = 0;
  for (const auto& r : rows) {
    if (r.delivered) ++s.delivered;
    if (r.oracle_reachable) ++s.oracle_reachable;
    if (r.delivered == r.oracle_reachable) ++s.delivery_matches_oracle;
    recirc_sum += r.total_recirc;
    s.max_recirc = std::max(s.max_recirc, r.total_recirc);
    if (r.total_recirc == 0) ++zero;
    recircs.push_back(r.total_recirc);
    if (r.stretch) {
      stretch_sum += *r.stretch;
      s.max_stretch = std::max(s.max_stretch, *r.stretch);
      if (*r.stretch < 2.0) ++below2;
      stretches.push_back(*r.stretch);
    }
  }
  if (!rows.empty()) {
    s.avg_recirc = recirc_sum / static_cast<double>(rows.size());
    s.zero_recirc_fraction = static_cast<double>(zero) / static_cast<double>(rows.size());
  }
  s.stretch_samples = stretches.size();
  if (!stretches.empty()) {
    s.avg_stretch = stretch_sum / static_cast<double>(stretches.size());
    s.stretch_below_2_fraction = static_cast<double>(below2) / static_cast<double>(stretches.size());
  }
  s.recirc_cdf = cdf(std::move(recircs));
  s.stretch_cdf = cdf(std::move(stretches));
  return s;
}

std::string rows_to_csv(const std::vector<MetricsRow>& rows) {
  std::string out =
      "scenario,src,dst,delivered,oracle_reachable,total_recirc,hops,oracle_len,stretch,drop,"
      "fallbacks\n";
  for (const auto& r : rows) {
    out += std::to_string(r.scenario) + ',' + std::to_string(r.src) + ',' +
           std::to_string(r.dst) + ',' + (r.delivered ? "1" : "0") + ',' +
           (r.oracle_reachable ? "1" : "0") + ',' + std::to_string(r.total_recirc) + ',' +
           std::to_string(r.hops) + ',' + (r.oracle_len ? std::to_string(*r.oracle_len) : "") +
           ',' + (r.stretch ? fmt(*r.stretch) : "") + ',' +
           (r.drop == DropReason::kNone ? "" : std::string(to_string(r.drop))) + ',' +
           std::to_string(r.fallbacks) + '\n';
  }
  return out;
}

std::string summary_to_json(const ExperimentSummary& s) {
  nlohmann::ordered_json j;
  j["rows"] = s.rows;
  j["delivered"] = s.delivered;
  j["oracle_reachable"] = s.oracle_reachable;
  j["delivery_matches_oracle"] = s.delivery_matches_oracle;
  j["avg_recirc"] = s.avg_recirc;
  j["max_recirc"] = s.max_recirc;
  j["zero_recirc_fraction"] = s.zero_recirc_fraction;
  j["stretch_samples"] = s.stretch_samples;
  j["avg_stretch"] = s.avg_stretch;
  j["max_stretch"] = s.max_stretch;
  j["stretch_below_2_fraction"] = s.stretch_below_2_fraction;
  auto pairs = [](const std::vector<std::pair<double, double>>& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (auto [x, f] : v) a.push_back({x, f});
    return a;
  };
  j["recirc_cdf"] = pairs(s.recirc_cdf);
  j["stretch_cdf"] = pairs(s.stretch_cdf);
  return j.dump(2) + "\n";
}

}  // namespace dproute
