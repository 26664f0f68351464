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


#include "dproute/rule_json.hpp"

#include "dproute/errors.hpp"
#include "json.hpp"

namespace dproute {

namespace {

using json = nlohmann::ordered_json;

json action_to_json(const ActionSpec& a) {
  json j;
  j["action"] = std::string(to_string(a.kind));
  json p = json::object();
  if (a.n) p["n"] = a.n;
  if (a.m) p["m"] = a.m;
  if (a.value) p["value"] = a.value;
  if (a.mask.width() > 0) {
    p["mask"] = a.mask.to_hex();
    p["mask_width"] = a.mask.width();
  }
  if (!p.empty()) j["params"] = std::move(p);
  return j;
}

ActionSpec action_from_json(const json& j, std::size_t width) {
  ActionSpec a;
  a.kind = parse_action_kind(j.at("action").get<std::string>());
  if (j.contains("params")) {
    const auto& p = j.at("params");
    a.n = p.value("n", SwitchId{0});
    a.m = p.value("m", SwitchId{0});
    a.value = p.value("value", std::uint8_t{0});
    if (p.contains("mask")) {
      a.mask = BitVec::from_hex(p.at("mask").get<std::string>(),
                                p.value("mask_width", width));
    }
  }
  return a;
}

std::pair<BitVec, BitVec> parse_ternary(const std::string& s, std::size_t width) {
  if (s.size() != width) throw ParseError("visited pattern width mismatch");
  BitVec value(width), mask(width);
  for (std::size_t i = 0; i < width; ++i) {
    LinkId id = static_cast<LinkId>(width - i);
    switch (s[i]) {
      case '*': break;
      case '1': value.set(id); [[fallthrough]];
      case '0': mask.set(id); break;
      default: throw ParseError("bad ternary character in visited pattern");
    }
  }
  return {value, mask};
}

// Width of the visited vector in the schema, 0 when absent.
std::size_t visited_width(const std::vector<FieldSpec>& schema) {
  for (const auto& f : schema) {
    if (f.field == Field::kVisited) return f.width;
  }
  return 0;
}

json table_json(const Table& t) {
  json j;
  j["table"] = t.name();
  j["default"] = action_to_json(t.default_action());
  json schema = json::array();
  for (const auto& f : t.schema()) {
    schema.push_back({{"field", std::string(to_string(f.field))},
                      {"kind", std::string(to_string(f.kind))},
                      {"width", f.width}});
  }
  j["schema"] = std::move(schema);
  json rules = json::array();
  for (const auto& r : t.rules()) {
    json keys = json::array();
    std::size_t k = 0;
    for (const auto& f : t.schema()) {
      json key;
      key["field"] = std::string(to_string(f.field));
      if (f.field == Field::kVisited) {
        key["kind"] = "ternary";
        key["value"] = r.vec_value.to_ternary_string(r.vec_mask);
      } else {
        const auto& m = r.keys[k++];
        key["kind"] = std::string(to_string(m.kind));
        key["value"] = m.value;
        if (m.kind == MatchKind::kTernary) key["mask"] = m.mask;
        if (m.kind == MatchKind::kLpm) key["prefix"] = m.prefix;
      }
      keys.push_back(std::move(key));
    }
    json rule;
    rule["keys"] = std::move(keys);
    json a = action_to_json(r.action);
    rule["action"] = a["action"];
    if (a.contains("params")) rule["params"] = a["params"];
    rules.push_back(std::move(rule));
  }
  j["rules"] = std::move(rules);
  return j;
}

}  // namespace

std::string table_to_json(const Table& t, int indent) { return table_json(t).dump(indent); }

Table table_from_json(const std::string& text) {
  try {
    auto j = json::parse(text);
    std::vector<FieldSpec> schema;
    for (const auto& f : j.at("schema")) {
      schema.push_back({parse_field(f.at("field").get<std::string>()),
                        parse_match_kind(f.at("kind").get<std::string>()),
                        f.at("width").get<unsigned>()});
    }
    std::size_t width = visited_width(schema);
    Table table(j.at("table").get<std::string>(), schema, action_from_json(j.at("default"), width));
    for (const auto& r : j.at("rules")) {
      TableRule rule;
      for (const auto& key : r.at("keys")) {
        Field field = parse_field(key.at("field").get<std::string>());
        if (field == Field::kVisited) {
          auto [v, m] = parse_ternary(key.at("value").get<std::string>(), width);
          rule.vec_value = std::move(v);
          rule.vec_mask = std::move(m);
          continue;
        }
        MatchKey mk;
        mk.kind = parse_match_kind(key.at("kind").get<std::string>());
        mk.value = key.at("value").get<std::uint64_t>();
        mk.mask = key.value("mask", std::uint64_t{0});
        mk.prefix = key.value("prefix", 0U);
        rule.keys.push_back(mk);
      }
      json a{{"action", r.at("action")}};
      if (r.contains("params")) a["params"] = r.at("params");
      rule.action = action_from_json(a, width);
      table.add(std::move(rule));
    }
    return table;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("rule file: ") + ex.what());
  }
}

std::string switch_rules_to_json(const RuleSet& rules, SwitchId s) {
  auto it = rules.switches.find(s);
  if (it == rules.switches.end()) throw MissingRules("no rules for switch " + std::to_string(s));
  json j;
  j["switch"] = s;
  j["fingerprint"] = rules.fingerprint;
  j["width"] = rules.width;
  json tables = json::array();
  tables.push_back(table_json(it->second.forwarding));
  if (it->second.hierarchy) tables.push_back(table_json(*it->second.hierarchy));
  j["tables"] = std::move(tables);
  return j.dump(1);
}

std::string traversal_rules_to_json(const RuleSet& rules) {
  json j;
  j["fingerprint"] = rules.fingerprint;
  j["width"] = rules.width;
  j["max_len_cap"] = rules.max_len_cap;
  j["tables"] = json::array({table_json(*rules.bfs), table_json(*rules.iddfs)});
  return j.dump(1);
}

std::string manifest_to_json(const RuleSet& rules, const std::string& topology_name) {
  json j;
  j["topology"] = topology_name;
  j["fingerprint"] = rules.fingerprint;
  j["width"] = rules.width;
  j["hierarchical"] = rules.hierarchical;
  j["max_len_cap"] = rules.max_len_cap;
  j["traversal"] = {{"file", "traversal.json"},
                    {"bfs_rules", rules.bfs->size()},
                    {"iddfs_rules", rules.iddfs->size()}};
  json sw = json::array();
  for (const auto& [s, r] : rules.switches) {
    json e;
    e["switch"] = s;
    e["file"] = "switch_" + std::to_string(s) + ".json";
    json tables = json::object();
    tables["forwarding"] = r.forwarding.size();
    if (r.hierarchy) tables["hierarchy"] = r.hierarchy->size();
    e["tables"] = std::move(tables);
    sw.push_back(std::move(e));
  }
  j["switches"] = std::move(sw);
  return j.dump(1);
}

}  // namespace dproute
