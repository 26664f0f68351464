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


// dproute: rule generation, single-packet routing, experiments and
// event-script emulation from the command line.
//
// Exit codes: 0 ok, 1 internal error, 2 bad input, 3 packet dropped.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dproute/errors.hpp"
#include "dproute/experiment.hpp"
#include "dproute/hierarchy.hpp"
#include "dproute/oracle.hpp"
#include "dproute/policy.hpp"
#include "dproute/rule_json.hpp"
#include "dproute/ruleplane.hpp"
#include "dproute/simnet.hpp"
#include "dproute/topology.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dproute;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitDropped = 3;

struct Common {
  std::string topology;
  std::string mode = "iddfs";
  std::optional<std::size_t> domains;
  std::uint64_t seed = 1;
  std::string policy;
  unsigned stages = 10;
  unsigned path_hops = kDefaultPathCapacity;
  unsigned recirc_limit = 64;
};

void add_common(CLI::App* app, Common& c, bool with_policy = true) {
  app->add_option("--topology", c.topology, "GraphML or JSON topology file")->required();
  app->add_option("--mode", c.mode, "traversal: bfs or iddfs")
      ->check(CLI::IsMember({"bfs", "iddfs"}));
  app->add_option("--domains", c.domains, "partition into N domains (hierarchical routing)");
  app->add_option("--seed", c.seed, "seed for partitioning and failure sampling");
  if (with_policy) app->add_option("--policy", c.policy, "policy JSON file");
  app->add_option("--stages", c.stages, "table applications per pipeline pass")
      ->check(CLI::Range(1U, 1000U));
  app->add_option("--path-hops", c.path_hops, "source route capacity")
      ->check(CLI::Range(1U, 255U));
  app->add_option("--recirc-limit", c.recirc_limit, "recirculations before a packet is dropped");
}

NetworkOptions network_options(const Common& c) {
  NetworkOptions o;
  o.pipeline.stages_per_pass = c.stages;
  o.pipeline.recirc_limit = c.recirc_limit;
  o.path_capacity = static_cast<std::uint8_t>(c.path_hops);
  return o;
}

Network network_for(const Topology& t, const Common& c, bool record = false) {
  std::optional<DomainPartition> part;
  if (c.domains) part = partition_domains(t, *c.domains, c.seed);
  NetworkOptions o = network_options(c);
  o.pipeline.record_fired = record;
  return make_network(t, std::move(part), o);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ParseError("cannot write " + p.string());
  out << text;
}

Edge parse_edge(const std::string& s) {
  auto dash = s.find('-');
  if (dash == std::string::npos) throw ParseError("link '" + s + "' is not of the form a-b");
  try {
    return {static_cast<SwitchId>(std::stoul(s.substr(0, dash))),
            static_cast<SwitchId>(std::stoul(s.substr(dash + 1)))};
  } catch (const std::exception&) {
    throw ParseError("link '" + s + "' is not of the form a-b");
  }
}

void print_trace(const TraceRecord& tr, bool verbose) {
  std::cout << "hops: " << format_hops(tr.hops) << "\n";
  std::cout << "verdict: "
            << (tr.delivered ? std::string("delivered")
                             : "dropped (" + std::string(to_string(tr.drop_reason)) + ")")
            << "\n";
  std::cout << "recirculations: " << tr.total_recirc;
  if (!tr.per_switch_recirc.empty()) {
    std::cout << " (";
    bool first = true;
    for (const auto& [s, n] : tr.per_switch_recirc) {
      std::cout << (first ? "" : ", ") << s << ":" << n;
      first = false;
    }
    std::cout << ")";
  }
  std::cout << "\nrecomputations: " << tr.recomputations << "\n";
  if (tr.fallbacks) std::cout << "fallbacks: " << tr.fallbacks << "\n";
  if (!verbose) return;
  for (const auto& f : tr.fired) {
    std::cout << "  sw " << f.sw << " pass " << f.rule.pass << " stage " << f.rule.stage << " "
              << (f.rule.table ? f.rule.table->name() : std::string("-")) << "[";
    if (f.rule.rule < 0) {
      std::cout << "default";
    } else {
      std::cout << f.rule.rule;
    }
    std::cout << "] " << to_string(f.rule.action) << " curr=" << f.rule.curr;
    if (f.rule.n) std::cout << " n=" << f.rule.n;
    std::cout << "\n";
  }
  std::cout << "final header: " << describe(tr.final_header) << "\n";
}

int cmd_gen_rules(const Common& c, const std::string& out_dir, unsigned max_len_cap) {
  Topology t = load_topology(c.topology);
  std::optional<HierarchyLayout> layout;
  if (c.domains) layout.emplace(t, partition_domains(t, *c.domains, c.seed));
  RuleGenOptions opts;
  opts.max_len_cap = static_cast<std::uint16_t>(max_len_cap);
  RuleSet rules = compile_rules(t, layout ? &*layout : nullptr, opts);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "traversal.json", traversal_rules_to_json(rules));
  for (const auto& [s, r] : rules.switches) {
    write_file(fs::path(out_dir) / ("switch_" + std::to_string(s) + ".json"),
               switch_rules_to_json(rules, s));
  }
  write_file(fs::path(out_dir) / "manifest.json", manifest_to_json(rules, t.name()));
  if (!t.labels().empty()) write_label_sidecar(t, fs::path(out_dir) / "labels.json");
  std::cout << "wrote " << rules.switches.size() << " switch rule files, " << rules.bfs->size()
            << " bfs and " << rules.iddfs->size() << " iddfs rules to " << out_dir << "\n";
  return kExitOk;
}

int cmd_route(const Common& c, SwitchId src, SwitchId dst, const std::vector<std::string>& fails,
              bool verbose, bool as_json, std::uint32_t flow) {
  Topology t = load_topology(c.topology);
  TraversalMode mode = parse_traversal_mode(c.mode);
  Network net = network_for(t, c, verbose);
  for (const auto& f : fails) {
    auto [a, b] = parse_edge(f);
    net.link_down(a, b);
  }
  PolicyBlock policy;
  if (!c.policy.empty()) policy = load_policy_file(t, c.policy, mode).for_flow(src, dst, mode);
  TraceRecord tr = net.run_packet(src, dst, policy, mode, flow);
  if (as_json) {
    std::cout << trace_to_json(tr) << "\n";
  } else {
    print_trace(tr, verbose);
  }
  return tr.delivered ? kExitOk : kExitDropped;
}

int cmd_experiment(const Common& c, unsigned k, unsigned scenarios, unsigned threads,
                   const std::string& out) {
  Topology t = load_topology(c.topology);
  ExperimentConfig cfg;
  cfg.mode = parse_traversal_mode(c.mode);
  cfg.domains = c.domains;
  cfg.k = k;
  cfg.scenarios = scenarios;
  cfg.seed = c.seed;
  cfg.stages_per_pass = c.stages;
  cfg.path_capacity = static_cast<std::uint8_t>(c.path_hops);
  cfg.recirc_limit = c.recirc_limit;
  cfg.threads = threads;
  if (!c.policy.empty()) cfg.policy = load_policy_file(t, c.policy, cfg.mode);
  ExperimentResult res = run_experiment(t, cfg);
  std::string summary = summary_to_json(res.summary);
  if (out.empty()) {
    std::cout << rows_to_csv(res.rows);
    std::cerr << summary;
  } else {
    fs::path csv(out);
    if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
    write_file(csv, rows_to_csv(res.rows));
    fs::path sum = csv;
    sum.replace_extension(".summary.json");
    write_file(sum, summary);
    std::cout << summary;
  }
  return kExitOk;
}

int cmd_emulate(const Common& c, const std::string& script_path, bool strict,
                const std::string& out) {
  Topology t = load_topology(c.topology);
  Network net = network_for(t, c);
  EventScript script = load_event_script(script_path);
  TraversalMode mode = parse_traversal_mode(c.mode);
  std::string log;
  int rc = kExitOk;
  // replay event by event so each injection is checked against the oracle
  for (const auto& ev : script.events) {
    EventScript one{{ev}};
    auto traces = net.run_script(one, mode);
    if (traces.empty()) {
      log += "event " + std::to_string(ev.seq) + ": link " + std::to_string(ev.link.first) + "-" +
             std::to_string(ev.link.second) +
             (ev.kind == Event::Kind::kLinkDown ? " down" : " up") + "\n";
      continue;
    }
    const auto& tr = traces.front();
    auto failed = failed_links_from_bits(t, net.down_links());
    auto o = ev.chain.empty() ? shortest_active_path(t, failed, ev.src, ev.dst)
                              : compliant_shortest_path(t, failed, ev.src, ev.dst, ev.chain);
    log += "event " + std::to_string(ev.seq) + ": inject " + std::to_string(ev.src) + "->" +
           std::to_string(ev.dst) + " path " + format_hops(tr.hops) + " " +
           (tr.delivered ? "delivered" : "dropped (" + std::string(to_string(tr.drop_reason)) + ")") +
           " recirc " + std::to_string(tr.total_recirc) + "\n";
    if (!tr.delivered && o.reachable) rc = kExitDropped;
    if (!tr.delivered && strict) rc = kExitDropped;
  }
  std::cout << log;
  if (!out.empty()) write_file(out, log);
  return rc;
}

int cmd_partition(const Common& c) {
  Topology t = load_topology(c.topology);
  if (!c.domains) throw ParseError("partition needs --domains");
  DomainPartition p = partition_domains(t, *c.domains, c.seed);
  DomainGraph g = build_domain_graph(t, p);
  nlohmann::ordered_json j;
  j["topology"] = t.name();
  j["seed"] = c.seed;
  nlohmann::ordered_json domains = nlohmann::ordered_json::object();
  for (DomainId d : p.domain_ids) domains[std::to_string(d)] = p.members(d);
  j["domains"] = std::move(domains);
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (auto [a, b] : g.graph.edges()) edges.push_back({a, b});
  j["domain_links"] = std::move(edges);
  nlohmann::ordered_json vs = nlohmann::ordered_json::array();
  for (const auto& [key, v] : p.virtual_switch) {
    vs.push_back({{"domain", key.first}, {"neighbor", key.second}, {"switch", v}});
  }
  j["virtual_switches"] = std::move(vs);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dproute: dataplane route computation simulator"};
  app.require_subcommand(1);

  Common gen_c, route_c, exp_c, emu_c, part_c;

  auto* gen = app.add_subcommand("gen-rules", "compile rule files for every switch");
  add_common(gen, gen_c, false);
  std::string gen_out = "rules";
  unsigned max_len_cap = 0;
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--max-len-cap", max_len_cap, "IDDFS length cap (power of two, 0 = derived)");

  auto* route = app.add_subcommand("route", "route one packet and print its trace");
  add_common(route, route_c);
  SwitchId src = 0, dst = 0;
  std::vector<std::string> fails;
  bool verbose = false, as_json = false;
  std::uint32_t flow = 0;
  route->add_option("--src", src)->required();
  route->add_option("--dst", dst)->required();
  route->add_option("--fail", fails, "failed link a-b (repeatable)");
  route->add_option("--flow", flow, "flow id (WCMP hashing)");
  route->add_flag("-v,--verbose", verbose, "print fired rules and the final header");
  route->add_flag("--json", as_json, "print the trace as JSON");

  auto* exp = app.add_subcommand("experiment", "all-pairs routing over failure scenarios");
  add_common(exp, exp_c);
  unsigned k = 0, scenarios = 20, threads = 1;
  std::string exp_out;
  exp->add_option("--k", k, "failed links per scenario")->check(CLI::Range(0U, 16U));
  exp->add_option("--scenarios", scenarios, "scenarios per k");
  exp->add_option("--threads", threads, "worker threads");
  exp->add_option("--out", exp_out, "CSV path (summary goes next to it)");

  auto* emu = app.add_subcommand("emulate", "run an event script");
  add_common(emu, emu_c, false);
  std::string script;
  bool strict = false;
  std::string emu_out;
  emu->add_option("--script", script, "event script JSON")->required();
  emu->add_flag("--strict", strict, "exit 3 on any drop");
  emu->add_option("--out", emu_out, "trace log path");

  auto* part = app.add_subcommand("partition", "print a seeded domain partition");
  add_common(part, part_c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen) return cmd_gen_rules(gen_c, gen_out, max_len_cap);
    if (*route) return cmd_route(route_c, src, dst, fails, verbose, as_json, flow);
    if (*exp) return cmd_experiment(exp_c, k, scenarios, threads, exp_out);
    if (*emu) return cmd_emulate(emu_c, script, strict, emu_out);
    if (*part) return cmd_partition(part_c);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
