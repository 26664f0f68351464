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


#ifndef DPROUTE_RULE_JSON_HPP_
#define DPROUTE_RULE_JSON_HPP_

// JSON form of match-action tables. Output is byte-stable: keys are emitted
// in a fixed order and rules in priority order.
//
// {"table": "bfs", "default": {"action": "unreachable"},
//  "schema": [{"field": "curr", "kind": "exact", "width": 16}, ...],
//  "rules": [{"keys": [{"field": "curr", "kind": "exact", "value": 1},
//                      {"field": "visited_vec", "kind": "ternary",
//                       "value": "*******0"}, ...],
//             "action": "push_neighbor",
//             "params": {"n": 2, "mask": "0x09", "mask_width": 8}}]}

#include <string>

#include "dproute/pipeline.hpp"
#include "dproute/ruleplane.hpp"

namespace dproute {

std::string table_to_json(const Table& t, int indent = -1);
// Throws ParseError, InvalidRule.
Table table_from_json(const std::string& text);

// One switch's own tables (forwarding, hierarchy) as a JSON document.
std::string switch_rules_to_json(const RuleSet& rules, SwitchId s);
// The shared traversal tables (bfs, iddfs).
std::string traversal_rules_to_json(const RuleSet& rules);
// Manifest listing every emitted file with rule counts.
std::string manifest_to_json(const RuleSet& rules, const std::string& topology_name);

}  // namespace dproute

#endif  // DPROUTE_RULE_JSON_HPP_
