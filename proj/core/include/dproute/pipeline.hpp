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

#ifndef DPROUTE_PIPELINE_HPP_
#define DPROUTE_PIPELINE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dproute/bitvec.hpp"
#include "dproute/header.hpp"
#include "dproute/topology.hpp"

namespace dproute {

class HierarchyLayout;

// Header fields and pipeline metadata a table can match on. Fields after
// kVisited are derived per lookup (the metadata an earlier stage would set).
enum class Field : std::uint8_t {
  kCurr,
  kStackSel,
  kLen,
  kMaxLen,
  kHierarchy,
  kVisited,
  kOtherStackLive,  // inactive BFS stack holds more than the sentinel
  kPref,            // resolved preference for curr
  kNextHop,         // source-route hop at the cursor, 0 when exhausted
  kLocalFailed,     // the local link toward kNextHop is down
  kAtFinal,         // curr is the final destination and the chain is done
  kDstDomain,
  kDomainValid,
  kDomainNext,  // domain after curr's domain on the domain path, 0 if none/failed
  kActiveMask,  // WCMP: bit i set when next hop i is up
  kHash,        // WCMP: flow hash
  kCount
};

inline constexpr std::size_t kFieldCount = static_cast<std::size_t>(Field::kCount);

std::string_view to_string(Field f) noexcept;
Field parse_field(std::string_view s);

enum class MatchKind : std::uint8_t { kExact, kTernary, kLpm, kWildcard };

std::string_view to_string(MatchKind k) noexcept;
MatchKind parse_match_kind(std::string_view s);

struct FieldSpec {
  Field field;
  MatchKind kind;  // kExact, kTernary or kLpm
  unsigned width;  // bits; the visited vector uses the topology width
};

// Matcher on one scalar field. The visited vector's ternary pattern lives on
// the rule (TableRule::vec_value/vec_mask) because it is the only wide field.
struct MatchKey {
  MatchKind kind = MatchKind::kWildcard;
  std::uint64_t value = 0;
  std::uint64_t mask = 0;    // ternary
  unsigned prefix = 0;       // lpm

  static MatchKey exact(std::uint64_t v) { return {MatchKind::kExact, v, 0, 0}; }
  static MatchKey ternary(std::uint64_t v, std::uint64_t m) { return {MatchKind::kTernary, v & m, m, 0}; }
  static MatchKey lpm(std::uint64_t v, unsigned p) { return {MatchKind::kLpm, v, 0, p}; }
  static MatchKey any() { return {}; }

  friend bool operator==(const MatchKey&, const MatchKey&) = default;
};

enum class ActionKind : std::uint8_t {
  kNoop,
  kPushNeighbor,
  kPopStack,
  kChangeStack,
  kGotoNeighbor,
  kBacktrack,
  kIncreaseLength,
  kUnreachable,
  kForward,
  kDeliver,
  kDivert,
  kFcpUpdate,
  kNextTarget,
  kDomainEnter,
  kDomainCommit,
  kDomainReroute,
  kFlatRoute,
  kWcmpMap,
};

std::string_view to_string(ActionKind k) noexcept;
ActionKind parse_action_kind(std::string_view s);

struct ActionSpec {
  ActionKind kind = ActionKind::kNoop;
  SwitchId n = 0;       // neighbor / next hop / target / origin domain
  SwitchId m = 0;       // second switch parameter (destination domain)
  std::uint8_t value = 0;  // pref value for wcmp_map
  BitVec mask;          // n_visited / scope mask

  friend bool operator==(const ActionSpec&, const ActionSpec&) = default;
};

struct TableRule {
  std::vector<MatchKey> keys;  // one per scalar schema field, schema order
  BitVec vec_value;            // visited ternary (empty when unused)
  BitVec vec_mask;
  ActionSpec action;
  std::uint32_t priority = 0;  // insertion order

  friend bool operator==(const TableRule&, const TableRule&) = default;
};

// Values of the fields a lookup reads.
struct MatchInput {
  std::array<std::uint64_t, kFieldCount> scalar{};
  const BitVec* visited = nullptr;
};

class Table {
 public:
  Table() = default;
  Table(std::string name, std::vector<FieldSpec> schema, ActionSpec default_action);

  const std::string& name() const noexcept { return name_; }
  const std::vector<FieldSpec>& schema() const noexcept { return schema_; }
  const ActionSpec& default_action() const noexcept { return default_; }
  const std::vector<TableRule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }

  // Appends a rule; its priority is its insertion index. Throws InvalidRule
  // when the keys do not fit the schema.
  void add(TableRule rule);

  // Index of the winning rule, or nullopt for the default action. Among the
  // matching rules the longest lpm prefix wins; ties (and tables without an
  // lpm field) go to the lowest priority.
  std::optional<std::size_t> match(const MatchInput& in) const;
  const ActionSpec& lookup(const MatchInput& in) const {
    auto i = match(in);
    return i ? rules_[*i].action : default_;
  }

 private:
  bool rule_matches(const TableRule& r, const MatchInput& in) const;
  std::uint64_t bucket_key(const MatchInput& in) const;
  std::uint64_t bucket_key(const TableRule& r) const;

  std::string name_;
  std::vector<FieldSpec> schema_;
  std::vector<std::size_t> scalar_pos_;  // schema index of each scalar key
  int visited_pos_ = -1;
  int lpm_key_ = -1;                      // index into keys of the lpm field
  std::vector<std::size_t> exact_keys_;  // indices into keys
  ActionSpec default_;
  std::vector<TableRule> rules_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
};

// Schemas of the built-in tables.
std::vector<FieldSpec> bfs_schema(std::size_t width);
std::vector<FieldSpec> iddfs_schema(std::size_t width);
std::vector<FieldSpec> forwarding_schema();
std::vector<FieldSpec> hierarchy_schema();
std::vector<FieldSpec> wcmp_schema();

// Static context actions and derived fields need.
struct ActionEnv {
  const Topology* topo = nullptr;           // rule topology
  const HierarchyLayout* layout = nullptr;  // null for flat networks
};

// Field builders for each table.
MatchInput traversal_input(const PacketHeader& h);
MatchInput hierarchy_input(const PacketHeader& h, const HierarchyLayout& layout);

// Executes `spec` on `h` in place. Throws StackUnderflow if a stack lost its
// sentinel.
void apply_action_inplace(const ActionSpec& spec, PacketHeader& h, const ActionEnv& env);
// Pure form: returns the updated copy.
PacketHeader apply_action(const ActionSpec& spec, PacketHeader h, const ActionEnv& env);

// Initial visited vector for a traversal over the given scope mask:
// mapped failures | scope. For flat networks the mask is empty.
BitVec scoped_visited(const PacketHeader& h, const ActionEnv& env, const BitVec* scope);

struct PipelineConfig {
  unsigned stages_per_pass = 10;
  unsigned recirc_limit = 64;
  bool wire_roundtrip = true;  // encode/decode the header on every recirculation
  bool record_fired = false;
};

struct FiredRule {
  unsigned pass = 0;
  unsigned stage = 0;
  const Table* table = nullptr;
  std::int64_t rule = -1;  // -1: default action
  ActionKind action = ActionKind::kNoop;
  SwitchId curr = 0;       // curr before the action
  SwitchId n = 0;          // action's switch parameter
};

enum class DropReason : std::uint8_t { kNone, kUnreachable, kRecircLimit, kHopLimit };
std::string_view to_string(DropReason r) noexcept;

enum class Verdict : std::uint8_t { kForward, kDeliver, kDrop };

struct PassResult {
  bool done = false;
  unsigned applications = 0;
};

struct ExecOutcome {
  Verdict verdict = Verdict::kDrop;
  SwitchId next_hop = 0;
  DropReason drop = DropReason::kNone;
  PacketHeader header;
  unsigned recirculations = 0;
  unsigned applications = 0;
  std::vector<FiredRule> fired;
};

// Ingress control of one switch. Each stage slot applies exactly one table:
//   exhausted                      -> stop
//   curr in dst, hierarchy = 1     -> domain_commit
//   curr in dst, chain remaining   -> next_target
//   curr in dst                    -> stop (route ready)
//   dst empty                      -> hierarchy table
//   otherwise                      -> bfs / iddfs table
// After stages_per_pass slots the packet recirculates.
class Pipeline {
 public:
  Pipeline() = default;
  Pipeline(const Table* bfs, const Table* iddfs, const Table* hierarchy, ActionEnv env,
           PipelineConfig config, std::uint32_t fingerprint);

  const PipelineConfig& config() const noexcept { return config_; }
  const ActionEnv& env() const noexcept { return env_; }

  bool finished(const PacketHeader& h) const noexcept;
  PassResult run_pass(PacketHeader& h, unsigned pass = 0,
                      std::vector<FiredRule>* fired = nullptr) const;
  ExecOutcome run_to_completion(PacketHeader h) const;

 private:
  const Table* bfs_ = nullptr;
  const Table* iddfs_ = nullptr;
  const Table* hierarchy_ = nullptr;
  ActionEnv env_;
  PipelineConfig config_;
  std::uint32_t fingerprint_ = 0;
};

}  // namespace dproute

#endif  // DPROUTE_PIPELINE_HPP_
