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

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "adgsyn/chem/smiles.hpp"

namespace adgsyn::chem {

// Versioned graph serialization for caching parsed molecules; the exact
// field layout is documented in docs/GRAPH_FORMAT.md.

inline constexpr int kGraphCacheVersion = 1;

nlohmann::json graph_to_json(const MolecularGraph& graph);
MolecularGraph graph_from_json(const nlohmann::json& j);

struct CachedGraph {
  std::string smiles;
  MolecularGraph graph;
};

void save_graph_cache(const std::string& path, const std::vector<CachedGraph>& graphs);
std::vector<CachedGraph> load_graph_cache(const std::string& path);

}  // namespace adgsyn::chem
