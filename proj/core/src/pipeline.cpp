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

#include "dproute/pipeline.hpp"

#include <algorithm>

#include "dproute/errors.hpp"
#include "dproute/hierarchy.hpp"
#include "dproute/wire.hpp"

namespace dproute {

namespace {

constexpr std::string_view kFieldNames[kFieldCount] = {
    "curr",       "stack",       "len",       "max_len",      "hierarchy",   "visited_vec",
    "other_stack_live", "pref",  "next_hop",  "local_failed", "at_final",    "dst_domain",
    "domain_valid", "domain_next", "active_mask", "hash"};

constexpr std::string_view kActionNames[] = {
    "noop",          "push_neighbor", "pop_stack",     "change_stack",  "goto_neighbor",
    "backtrack",     "increase_length", "unreachable", "forward",       "deliver",
    "divert",        "fcp_update",    "next_target",   "domain_enter",  "domain_commit",
    "domain_reroute", "flat_route",   "wcmp_map"};

constexpr std::uint64_t width_mask(unsigned w) {
  return w >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << w) - 1);
}

constexpr std::uint64_t kBucketSeed = 1469598103934665603ULL;

std::uint64_t mix_key(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

std::string_view to_string(Field f) noexcept { return kFieldNames[static_cast<std::size_t>(f)]; }

Field parse_field(std::string_view s) {
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    if (kFieldNames[i] == s) return static_cast<Field>(i);
  }
  throw ParseError("unknown match field '" + std::string(s) + "'");
}

std::string_view to_string(MatchKind k) noexcept {
  switch (k) {
    case MatchKind::kExact: return "exact";
    case MatchKind::kTernary: return "ternary";
    case MatchKind::kLpm: return "lpm";
    case MatchKind::kWildcard: return "wildcard";
  }
  return "?";
}

MatchKind parse_match_kind(std::string_view s) {
  if (s == "exact") return MatchKind::kExact;
  if (s == "ternary") return MatchKind::kTernary;
  if (s == "lpm") return MatchKind::kLpm;
  if (s == "wildcard") return MatchKind::kWildcard;
  throw ParseError("unknown match kind '" + std::string(s) + "'");
}

std::string_view to_string(ActionKind k) noexcept {
  return kActionNames[static_cast<std::size_t>(k)];
}

ActionKind parse_action_kind(std::string_view s) {
  for (std::size_t i = 0; i < std::size(kActionNames); ++i) {
    if (kActionNames[i] == s) return static_cast<ActionKind>(i);
  }
  throw ParseError("unknown action '" + std::string(s) + "'");
}

std::string_view to_string(DropReason r) noexcept {
  switch (r) {
    case DropReason::kNone: return "none";
    case DropReason::kUnreachable: return "Unreachable";
    case DropReason::kRecircLimit: return "RecircLimit";
    case DropReason::kHopLimit: return "HopLimit";
  }
  return "?";
}

std::vector<FieldSpec> bfs_schema(std::size_t width) {
  return {{Field::kHierarchy, MatchKind::kExact, 1},
          {Field::kCurr, MatchKind::kExact, 16},
          {Field::kStackSel, MatchKind::kExact, 1},
          {Field::kOtherStackLive, MatchKind::kTernary, 1},
          {Field::kVisited, MatchKind::kTernary, static_cast<unsigned>(width)}};
}

std::vector<FieldSpec> iddfs_schema(std::size_t width) {
  return {{Field::kHierarchy, MatchKind::kExact, 1},
          {Field::kCurr, MatchKind::kExact, 16},
          {Field::kLen, MatchKind::kExact, 16},
          {Field::kMaxLen, MatchKind::kExact, 16},
          {Field::kVisited, MatchKind::kTernary, static_cast<unsigned>(width)},
          {Field::kPref, MatchKind::kLpm, kPrefBits}};
}

std::vector<FieldSpec> forwarding_schema() {
  return {{Field::kCurr, MatchKind::kExact, 16},
          {Field::kAtFinal, MatchKind::kTernary, 1},
          {Field::kNextHop, MatchKind::kTernary, 16},
          {Field::kLocalFailed, MatchKind::kTernary, 1}};
}

std::vector<FieldSpec> hierarchy_schema() {
  return {{Field::kDstDomain, MatchKind::kExact, 16},
          {Field::kDomainValid, MatchKind::kTernary, 1},
          {Field::kDomainNext, MatchKind::kTernary, 16}};
}

std::vector<FieldSpec> wcmp_schema() {
  return {{Field::kActiveMask, MatchKind::kExact, kMaxPrefHops},
          {Field::kHash, MatchKind::kTernary, kHashBits}};
}

Table::Table(std::string name, std::vector<FieldSpec> schema, ActionSpec default_action)
    : name_(std::move(name)), schema_(std::move(schema)), default_(std::move(default_action)) {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    const auto& f = schema_[i];
    if (f.field == Field::kVisited) {
      visited_pos_ = static_cast<int>(i);
      continue;
    }
    std::size_t k = scalar_pos_.size();
    scalar_pos_.push_back(i);
    if (f.kind == MatchKind::kExact) exact_keys_.push_back(k);
    if (f.kind == MatchKind::kLpm) lpm_key_ = static_cast<int>(k);
  }
}

void Table::add(TableRule rule) {
  if (rule.keys.size() != scalar_pos_.size()) {
    throw InvalidRule(name_ + ": rule has " + std::to_string(rule.keys.size()) + " keys, schema " +
                      std::to_string(scalar_pos_.size()));
  }
  for (std::size_t k = 0; k < rule.keys.size(); ++k) {
    const auto& spec = schema_[scalar_pos_[k]];
    auto& key = rule.keys[k];
    std::uint64_t wm = width_mask(spec.width);
    switch (spec.kind) {
      case MatchKind::kExact:
        if (key.kind != MatchKind::kExact) {
          throw InvalidRule(name_ + ": field " + std::string(to_string(spec.field)) +
                            " needs an exact key");
        }
        break;
      case MatchKind::kTernary:
        if (key.kind == MatchKind::kWildcard) key = MatchKey::ternary(0, 0);
        if (key.kind != MatchKind::kTernary) {
          throw InvalidRule(name_ + ": field " + std::string(to_string(spec.field)) +
                            " needs a ternary key");
        }
        break;
      case MatchKind::kLpm:
        if (key.kind == MatchKind::kWildcard) key = MatchKey::lpm(0, 0);
        if (key.kind != MatchKind::kLpm || key.prefix > spec.width) {
          throw InvalidRule(name_ + ": field " + std::string(to_string(spec.field)) +
                            " needs an lpm key with prefix <= width");
        }
        break;
      case MatchKind::kWildcard:
        break;
    }
    if ((key.value & ~wm) || (key.mask & ~wm)) {
      throw InvalidRule(name_ + ": value wider than field " + std::string(to_string(spec.field)));
    }
  }
  if (visited_pos_ >= 0) {
    std::size_t w = schema_[static_cast<std::size_t>(visited_pos_)].width;
    if (rule.vec_mask.width() == 0 && rule.vec_value.width() == 0) {
      rule.vec_mask = BitVec(w);
      rule.vec_value = BitVec(w);
    }
    if (rule.vec_mask.width() != w || rule.vec_value.width() != w) {
      throw InvalidRule(name_ + ": visited pattern width does not match the table");
    }
    rule.vec_value &= rule.vec_mask;
  }
  rule.priority = static_cast<std::uint32_t>(rules_.size());
  index_[bucket_key(rule)].push_back(rule.priority);
  rules_.push_back(std::move(rule));
}

std::uint64_t Table::bucket_key(const MatchInput& in) const {
  std::uint64_t h = kBucketSeed;
  for (std::size_t k : exact_keys_) {
    h = mix_key(h, in.scalar[static_cast<std::size_t>(schema_[scalar_pos_[k]].field)]);
  }
  return h;
}

std::uint64_t Table::bucket_key(const TableRule& r) const {
  std::uint64_t h = kBucketSeed;
  for (std::size_t k : exact_keys_) h = mix_key(h, r.keys[k].value);
  return h;
}

bool Table::rule_matches(const TableRule& r, const MatchInput& in) const {
  for (std::size_t k = 0; k < r.keys.size(); ++k) {
    const auto& spec = schema_[scalar_pos_[k]];
    std::uint64_t v = in.scalar[static_cast<std::size_t>(spec.field)];
    const auto& key = r.keys[k];
    switch (key.kind) {
      case MatchKind::kExact:
        if (v != key.value) return false;
        break;
      case MatchKind::kTernary:
        if ((v & key.mask) != key.value) return false;
        break;
      case MatchKind::kLpm:
        if (key.prefix > 0 && ((v ^ key.value) >> (spec.width - key.prefix)) != 0) return false;
        break;
      case MatchKind::kWildcard:
        break;
    }
  }
  if (visited_pos_ >= 0 && !in.visited->matches(r.vec_value, r.vec_mask)) return false;
  return true;
}

std::optional<std::size_t> Table::match(const MatchInput& in) const {
  if (visited_pos_ >= 0 && in.visited == nullptr) {
    throw InvalidRule(name_ + ": lookup without a visited vector");
  }
  auto it = index_.find(bucket_key(in));
  if (it == index_.end()) return std::nullopt;
  std::optional<std::size_t> best;
  unsigned best_prefix = 0;
  for (std::uint32_t idx : it->second) {
    const auto& r = rules_[idx];
    if (!rule_matches(r, in)) continue;
    if (lpm_key_ < 0) return idx;
    unsigned p = r.keys[static_cast<std::size_t>(lpm_key_)].prefix;
    if (!best || p > best_prefix) {
      best = idx;
      best_prefix = p;
    }
  }
  return best;
}

MatchInput traversal_input(const PacketHeader& h) {
  MatchInput in;
  in.scalar[static_cast<std::size_t>(Field::kCurr)] = h.curr;
  in.scalar[static_cast<std::size_t>(Field::kStackSel)] = h.stack_sel;
  in.scalar[static_cast<std::size_t>(Field::kLen)] = static_cast<std::uint16_t>(h.len);
  in.scalar[static_cast<std::size_t>(Field::kMaxLen)] = h.max_len;
  in.scalar[static_cast<std::size_t>(Field::kHierarchy)] = h.hierarchy;
  in.scalar[static_cast<std::size_t>(Field::kOtherStackLive)] = h.other_stack_live() ? 1 : 0;
  in.scalar[static_cast<std::size_t>(Field::kPref)] = h.pref_of(h.curr);
  in.visited = &h.visited;
  return in;
}

MatchInput hierarchy_input(const PacketHeader& h, const HierarchyLayout& layout) {
  const auto& part = layout.partition();
  MatchInput in;
  DomainId here = part.domain(h.home);
  in.scalar[static_cast<std::size_t>(Field::kDstDomain)] = part.domain(h.final_dst);
  in.scalar[static_cast<std::size_t>(Field::kDomainValid)] = h.domain_valid ? 1 : 0;
  std::uint64_t next = 0;
  if (h.domain_valid) {
    auto hops = h.domain_path.hops();
    for (std::size_t i = 0; i + 1 < hops.size(); ++i) {
      if (hops[i] != here) continue;
      auto link = layout.domain_graph().graph.find_link(here, hops[i + 1]);
      if (link && !layout.map_failures(h.fail).test(*link)) next = hops[i + 1];
      break;
    }
  }
  in.scalar[static_cast<std::size_t>(Field::kDomainNext)] = next;
  return in;
}

Pipeline::Pipeline(const Table* bfs, const Table* iddfs, const Table* hierarchy, ActionEnv env,
                   PipelineConfig config, std::uint32_t fingerprint)
    : bfs_(bfs), iddfs_(iddfs), hierarchy_(hierarchy), env_(env), config_(config),
      fingerprint_(fingerprint) {
  if (config_.stages_per_pass < 1) throw InvalidRule("stages_per_pass must be >= 1");
}

bool Pipeline::finished(const PacketHeader& h) const noexcept {
  if (h.exhausted) return true;
  return h.hierarchy == 0 && !h.dst.empty() && h.in_dst(h.curr) &&
         h.target_cursor >= h.policy.mbox_chain.size();
}

PassResult Pipeline::run_pass(PacketHeader& h, unsigned pass,
                              std::vector<FiredRule>* fired) const {
  PassResult r;
  for (unsigned stage = 0; stage < config_.stages_per_pass; ++stage) {
    if (h.exhausted) break;
    const Table* table = nullptr;
    std::optional<std::size_t> rule;
    ActionSpec transition;
    const ActionSpec* spec = nullptr;
    if (!h.dst.empty() && h.in_dst(h.curr)) {
      if (h.hierarchy == 1) {
        transition.kind = ActionKind::kDomainCommit;
      } else if (h.target_cursor < h.policy.mbox_chain.size()) {
        transition.kind = ActionKind::kNextTarget;
      } else {
        break;
      }
      spec = &transition;
    } else if (h.dst.empty()) {
      if (hierarchy_ == nullptr || env_.layout == nullptr) {
        throw MissingRules("packet needs hierarchy rules on a flat pipeline");
      }
      table = hierarchy_;
      rule = table->match(hierarchy_input(h, *env_.layout));
    } else {
      table = h.mode == TraversalMode::kBfs ? bfs_ : iddfs_;
      if (table == nullptr) throw MissingRules("no traversal table for the packet's mode");
      rule = table->match(traversal_input(h));
    }
    if (table) spec = rule ? &table->rules()[*rule].action : &table->default_action();
    if (fired) {
      fired->push_back({pass, stage, table, rule ? static_cast<std::int64_t>(*rule) : -1,
                        spec->kind, h.curr, spec->n});
    }
    apply_action_inplace(*spec, h, env_);
    ++r.applications;
  }
  r.done = finished(h);
  return r;
}

ExecOutcome Pipeline::run_to_completion(PacketHeader h) const {
  ExecOutcome out;
  std::vector<FiredRule>* fired = config_.record_fired ? &out.fired : nullptr;
  unsigned pass = 0;
  for (;;) {
    auto r = run_pass(h, pass, fired);
    out.applications += r.applications;
    if (r.done) break;
    if (pass >= config_.recirc_limit) {
      out.verdict = Verdict::kDrop;
      out.drop = DropReason::kRecircLimit;
      out.recirculations = pass;
      out.header = std::move(h);
      return out;
    }
    if (config_.wire_roundtrip) {
      auto bytes = encode(h, fingerprint_, WireScope::kRecirculation);
      h = decode(bytes, fingerprint_).header;
    }
    ++pass;
  }
  out.recirculations = pass;
  if (h.exhausted) {
    out.verdict = Verdict::kDrop;
    out.drop = DropReason::kUnreachable;
  } else if (h.path.stored() > h.path_cursor) {
    out.verdict = Verdict::kForward;
    out.next_hop = h.next_hop();
  } else {
    out.verdict = Verdict::kDeliver;
  }
  out.header = std::move(h);
  return out;
}

}  // namespace dproute
