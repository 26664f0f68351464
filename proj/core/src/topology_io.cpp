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

#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"

#include "dproute/errors.hpp"
#include "dproute/topology.hpp"

namespace dproute {

namespace {

using boost::property_tree::ptree;
using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open topology file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Topology finish(Topology t) {
  if (t.switch_count() == 0) throw ParseError("topology has no switches");
  if (!t.is_connected()) throw DisconnectedError("topology '" + t.name() + "' is not connected");
  return t;
}

SwitchId checked_switch_id(std::int64_t v) {
  if (v <= 0 || v > std::numeric_limits<SwitchId>::max()) {
    throw ParseError("switch id " + std::to_string(v) + " out of range (1..65535)");
  }
  return static_cast<SwitchId>(v);
}

}  // namespace

Topology parse_topology_json(const std::string& text, const std::string& default_name,
                             LinkOrder order) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("topology JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("switches") || !doc.contains("links")) {
    throw ParseError("topology JSON needs 'switches' and 'links'");
  }
  std::vector<SwitchId> switches;
  std::vector<Edge> edges;
  try {
    for (const auto& s : doc.at("switches")) switches.push_back(checked_switch_id(s.get<std::int64_t>()));
    for (const auto& l : doc.at("links")) {
      if (!l.is_array() || l.size() != 2) throw ParseError("topology JSON: link must be [a, b]");
      edges.emplace_back(checked_switch_id(l[0].get<std::int64_t>()),
                         checked_switch_id(l[1].get<std::int64_t>()));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("topology JSON: ") + e.what());
  }
  std::string name = doc.value("name", default_name);
  try {
    return finish(Topology::from_edges(name, std::move(switches), std::move(edges), order));
  } catch (const InvalidTopology& e) {
    throw ParseError(e.what());
  }
}

Topology parse_topology_graphml(const std::string& text, const std::string& default_name,
                                LinkOrder order) {
  ptree doc;
  try {
    std::istringstream in(text);
    boost::property_tree::read_xml(in, doc);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw ParseError(std::string("GraphML: ") + e.what());
  }
  auto root = doc.get_child_optional("graphml");
  if (!root) throw ParseError("GraphML: missing <graphml> root");

  std::string label_key;
  std::string network_key;
  for (const auto& [tag, node] : *root) {
    if (tag != "key") continue;
    auto name = node.get<std::string>("<xmlattr>.attr.name", "");
    auto target = node.get<std::string>("<xmlattr>.for", "");
    auto id = node.get<std::string>("<xmlattr>.id", "");
    if (name == "label" && target == "node") label_key = id;
    if (name == "Network" && target == "graph") network_key = id;
  }
  auto graph = root->get_child_optional("graph");
  if (!graph) throw ParseError("GraphML: missing <graph>");

  std::string name = default_name;
  std::unordered_map<std::string, SwitchId> id_of;
  std::map<SwitchId, std::string> labels;
  std::vector<SwitchId> switches;
  std::vector<std::pair<std::string, std::string>> raw_edges;
  for (const auto& [tag, node] : *graph) {
    if (tag == "data") {
      if (!network_key.empty() && node.get<std::string>("<xmlattr>.key", "") == network_key) {
        name = node.get_value<std::string>();
      }
    } else if (tag == "node") {
      auto nid = node.get<std::string>("<xmlattr>.id", "");
      if (nid.empty()) throw ParseError("GraphML: node without id");
      if (id_of.contains(nid)) throw ParseError("GraphML: duplicate node id " + nid);
      if (switches.size() >= std::numeric_limits<SwitchId>::max() - 1) {
        throw ParseError("GraphML: too many nodes");
      }
      auto sid = static_cast<SwitchId>(switches.size() + 1);
      id_of.emplace(nid, sid);
      switches.push_back(sid);
      std::string label = nid;
      for (const auto& [dtag, data] : node) {
        if (dtag == "data" && data.get<std::string>("<xmlattr>.key", "") == label_key) {
          label = data.get_value<std::string>();
        }
      }
      labels.emplace(sid, label);
    } else if (tag == "edge") {
      auto s = node.get<std::string>("<xmlattr>.source", "");
      auto d = node.get<std::string>("<xmlattr>.target", "");
      if (s.empty() || d.empty()) throw ParseError("GraphML: edge without endpoints");
      raw_edges.emplace_back(s, d);
    }
  }
  std::vector<Edge> edges;
  for (const auto& [s, d] : raw_edges) {
    auto si = id_of.find(s);
    auto di = id_of.find(d);
    if (si == id_of.end() || di == id_of.end()) {
      throw ParseError("GraphML: edge references unknown node " + s + "->" + d);
    }
    edges.emplace_back(si->second, di->second);
  }
  Topology t = Topology::from_edges(name, std::move(switches), std::move(edges), order);
  t.set_labels(std::move(labels));
  return finish(std::move(t));
}

Topology load_topology(const std::filesystem::path& path, TopologyFormat format,
                       LinkOrder order) {
  if (format == TopologyFormat::kAuto) {
    auto ext = path.extension().string();
    if (ext == ".graphml" || ext == ".xml") {
      format = TopologyFormat::kGraphml;
    } else if (ext == ".json") {
      format = TopologyFormat::kJson;
    } else {
      throw ParseError("cannot infer topology format from '" + path.string() + "'");
    }
  }
  std::string text = read_file(path);
  std::string stem = path.stem().string();
  return format == TopologyFormat::kGraphml ? parse_topology_graphml(text, stem, order)
                                            : parse_topology_json(text, stem, order);
}

std::string topology_to_json(const Topology& t) {
  json doc;
  doc["name"] = t.name();
  doc["switches"] = std::vector<SwitchId>(t.switches().begin(), t.switches().end());
  json links = json::array();
  for (auto [a, b] : t.edges()) links.push_back({a, b});
  doc["links"] = links;
  return doc.dump(2) + "\n";
}

std::string label_sidecar_json(const Topology& t) {
  json doc = json::object();
  for (SwitchId s : t.switches()) {
    auto it = t.labels().find(s);
    doc[std::to_string(s)] = it == t.labels().end() ? std::to_string(s) : it->second;
  }
  return doc.dump(2) + "\n";
}

void write_label_sidecar(const Topology& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write label sidecar " + path.string());
  out << label_sidecar_json(t);
}

}  // namespace dproute
