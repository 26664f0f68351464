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


#ifndef DPROUTE_EXPERIMENT_HPP_
#define DPROUTE_EXPERIMENT_HPP_

// All-pairs routing experiments over seeded failure scenarios.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dproute/oracle.hpp"
#include "dproute/pipeline.hpp"
#include "dproute/policy.hpp"
#include "dproute/simnet.hpp"
#include "dproute/topology.hpp"

namespace dproute {

struct ExperimentConfig {
  TraversalMode mode = TraversalMode::kIddfs;
  std::optional<std::size_t> domains;  // hierarchical routing when set
  unsigned k = 0;                      // failed links per scenario
  unsigned scenarios = 20;             // ignored for k = 0 (one scenario)
  std::uint64_t seed = 1;
  std::vector<std::pair<SwitchId, SwitchId>> pairs;  // empty: all ordered pairs
  PolicySet policy;
  unsigned stages_per_pass = 10;
  std::uint8_t path_capacity = kDefaultPathCapacity;
  unsigned recirc_limit = 64;
  unsigned threads = 1;
};

struct Scenario {
  unsigned id = 0;
  std::vector<Edge> failed;  // bidirectional links, (lower, higher)
};

// k distinct bidirectional links per scenario, drawn uniformly from a seed
// derived from (seed, k, scenario id). k = 0 yields a single empty scenario.
std::vector<Scenario> failure_scenarios(const Topology& t, unsigned k, unsigned count,
                                        std::uint64_t seed);

struct MetricsRow {
  unsigned scenario = 0;
  SwitchId src = 0;
  SwitchId dst = 0;
  bool delivered = false;
  bool oracle_reachable = false;
  unsigned total_recirc = 0;
  std::size_t hops = 0;
  std::optional<std::size_t> oracle_len;
  std::optional<double> stretch;
  DropReason drop = DropReason::kNone;
  unsigned fallbacks = 0;
};

struct ExperimentSummary {
  std::size_t rows = 0;
  std::size_t delivered = 0;
  std::size_t oracle_reachable = 0;
  std::size_t delivery_matches_oracle = 0;
  double avg_recirc = 0;
  unsigned max_recirc = 0;
  double zero_recirc_fraction = 0;
  std::size_t stretch_samples = 0;
  double avg_stretch = 0;
  double max_stretch = 0;
  double stretch_below_2_fraction = 0;
  std::vector<std::pair<double, double>> recirc_cdf;   // (value, fraction <= value)
  std::vector<std::pair<double, double>> stretch_cdf;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;  // sorted by (scenario, src, dst)
  ExperimentSummary summary;
};

ExperimentResult run_experiment(const Topology& t, const ExperimentConfig& config);

// Runs on a prepared network (rules already installed); link state is
// replaced per scenario on a copy.
std::vector<MetricsRow> run_scenarios(const Network& net, const std::vector<Scenario>& scenarios,
                                      const ExperimentConfig& config);

ExperimentSummary summarize(const std::vector<MetricsRow>& rows);

std::string rows_to_csv(const std::vector<MetricsRow>& rows);
std::string summary_to_json(const ExperimentSummary& s);

}  // namespace dproute

#endif  // DPROUTE_EXPERIMENT_HPP_
