// Copyright 2026 the adgsyn authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adgsyn/chem/graph_json.hpp"

#include <fstream>

#include "adgsyn/chem/featurize.hpp"

namespace adgsyn::chem {

namespace {

BondOrder order_from_value(double v) {
  if (v == 1.0) return BondOrder::Single;
  if (v == 2.0) return BondOrder::Double;
  if (v == 3.0) return BondOrder::Triple;
  if (v == 1.5) return BondOrder::Aromatic;
  throw_error(ErrorCode::IoFailure, "bad bond order " + std::to_string(v));
}

}  // namespace

nlohmann::json graph_to_json(const MolecularGraph& graph) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : graph.atoms) {
    atoms.push_back({{"element", a.element},
                     {"degree", a.degree},
                     {"charge", a.formal_charge},
                     {"hydrogens", a.implicit_hydrogens},
                     {"aromatic", a.is_aromatic}});
  }
  nlohmann::json bonds = nlohmann::json::array();
  for (const Bond& b : graph.bonds) {
    bonds.push_back({b.a, b.b, bond_order_value(b.order)});
  }
  nlohmann::json features = nlohmann::json::array();
  const int n = graph.atom_count();
  if (!graph.features.empty()) {
    for (int i = 0; i < n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < kFeatureWidth; ++j) {
        row.push_back(graph.features[static_cast<std::size_t>(i) * kFeatureWidth + j]);
      }
      features.push_back(std::move(row));
    }
  }
  return {{"atoms", atoms}, {"bonds", bonds}, {"features", features}};
}

MolecularGraph graph_from_json(const nlohmann::json& j) {
  MolecularGraph graph;
  for (const auto& ja : j.at("atoms")) {
    Atom a;
    a.element = ja.at("element").get<std::string>();
    a.degree = ja.at("degree").get<int>();
    a.formal_charge = ja.at("charge").get<int>();
    a.implicit_hydrogens = ja.at("hydrogens").get<int>();
    a.is_aromatic = ja.at("aromatic").get<bool>();
    graph.atoms.push_back(std::move(a));
  }
  const int n = graph.atom_count();
  graph.adjacency.assign(static_cast<std::size_t>(n) * n, 0);
  for (const auto& jb : j.at("bonds")) {
    Bond b;
    b.a = jb.at(0).get<int>();
    b.b = jb.at(1).get<int>();
    b.order = order_from_value(jb.at(2).get<double>());
    if (b.a < 0 || b.a >= n || b.b < 0 || b.b >= n) {
      throw_error(ErrorCode::IoFailure, "bond index out of range in cached graph");
    }
    graph.adjacency[static_cast<std::size_t>(b.a) * n + b.b] = 1;
    graph.adjacency[static_cast<std::size_t>(b.b) * n + b.a] = 1;
    graph.bonds.push_back(b);
  }
  const auto& jf = j.at("features");
  if (!jf.empty()) {
    graph.features.reserve(static_cast<std::size_t>(n) * kFeatureWidth);
    for (const auto& row : jf) {
      if (row.size() != kFeatureWidth) {
        throw_error(ErrorCode::IoFailure, "cached feature row has wrong width");
      }
      for (const auto& v : row) graph.features.push_back(v.get<float>());
    }
  }
  graph.validate();
  return graph;
}

void save_graph_cache(const std::string& path, const std::vector<CachedGraph>& graphs) {
  nlohmann::json root;
  root["format"] = "adgsyn-graph-cache";
  root["version"] = kGraphCacheVersion;
  root["feature_version"] = kFeatureVersion;
  auto& arr = root["graphs"] = nlohmann::json::array();
  for (const CachedGraph& g : graphs) {
    nlohmann::json entry = graph_to_json(g.graph);
    entry["smiles"] = g.smiles;
    arr.push_back(std::move(entry));
  }
  std::ofstream os(path);
  if (!os) throw_error(ErrorCode::IoFailure, "cannot open for write: " + path);
  os << root.dump(1) << "\n";
}

std::vector<CachedGraph> load_graph_cache(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw_error(ErrorCode::IoFailure, "cannot open: " + path);
  nlohmann::json root;
  try {
    is >> root;
  } catch (const nlohmann::json::exception& e) {
    throw_error(ErrorCode::IoFailure, "bad graph cache JSON: " + std::string(e.what()));
  }
  if (root.value("format", "") != "adgsyn-graph-cache" ||
      root.value("version", 0) != kGraphCacheVersion) {
    throw_error(ErrorCode::IoFailure, "unrecognized graph cache header in " + path);
  }
  std::vector<CachedGraph> out;
  for (const auto& entry : root.at("graphs")) {
    out.push_back({entry.at("smiles").get<std::string>(), graph_from_json(entry)});
  }
  return out;
}

}  // namespace adgsyn::chem
