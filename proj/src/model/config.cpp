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

#include "adgsyn/model/config.hpp"

#include <set>

#include "adgsyn/error.hpp"

namespace adgsyn::model {

const char* graph_layer_name(GraphLayerKind k) {
  return k == GraphLayerKind::Gat ? "gat" : "gcn";
}
const char* condition_mode_name(ConditionMode m) {
  return m == ConditionMode::Add ? "add" : "concat";
}

GraphLayerKind graph_layer_from_name(const std::string& name) {
  if (name == "gat") return GraphLayerKind::Gat;
  if (name == "gcn") return GraphLayerKind::Gcn;
  throw_error(ErrorCode::ConfigInvalid, "graph_layer must be 'gat' or 'gcn', got '" + name + "'");
}

ConditionMode condition_mode_from_name(const std::string& name) {
  if (name == "add") return ConditionMode::Add;
  if (name == "concat") return ConditionMode::Concat;
  throw_error(ErrorCode::ConfigInvalid, "condition must be 'add' or 'concat', got '" + name + "'");
}

void ModelConfig::validate() const {
  if (feature_width <= 0 || cell_width <= 0 || cell_context_width <= 0 || gat_hidden <= 0 ||
      gat_heads <= 0 || lstm_hidden <= 0 || pool_width <= 0 || fusion_hidden <= 0) {
    throw_error(ErrorCode::ConfigInvalid, "model widths must be positive");
  }
  if (gat_hidden % gat_heads != 0) {
    throw_error(ErrorCode::ConfigInvalid, "gat_hidden must be divisible by gat_heads");
  }
  if (dropout < 0.0f || dropout >= 1.0f) {
    throw_error(ErrorCode::ConfigInvalid, "dropout must lie in [0, 1)");
  }
  for (int s : cell_stages) {
    if (s <= 0) throw_error(ErrorCode::ConfigInvalid, "cell_stages entries must be positive");
  }
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "feature_width",  "cell_width",     "cell_stages",        "cell_context_width",
      "gat_hidden",     "gat_heads",      "negative_slope",     "lstm_hidden",
      "pool_width",     "fusion_hidden",  "dropout",            "layer_norm_eps",
      "graph_layer",    "condition",      "shared_projections"};
  for (const auto& [key, value] : j.items()) {
    if (known.count(key) == 0) {
      throw_error(ErrorCode::ConfigInvalid, "unknown model config key '" + key + "'");
    }
  }
  ModelConfig c;
  c.feature_width = j.value("feature_width", c.feature_width);
  c.cell_width = j.value("cell_width", c.cell_width);
  if (j.contains("cell_stages")) c.cell_stages = j.at("cell_stages").get<std::vector<int>>();
  c.cell_context_width = j.value("cell_context_width", c.cell_context_width);
  c.gat_hidden = j.value("gat_hidden", c.gat_hidden);
  c.gat_heads = j.value("gat_heads", c.gat_heads);
  c.negative_slope = j.value("negative_slope", c.negative_slope);
  c.lstm_hidden = j.value("lstm_hidden", c.lstm_hidden);
  c.pool_width = j.value("pool_width", c.pool_width);
  c.fusion_hidden = j.value("fusion_hidden", c.fusion_hidden);
  c.dropout = j.value("dropout", c.dropout);
  c.layer_norm_eps = j.value("layer_norm_eps", c.layer_norm_eps);
  if (j.contains("graph_layer")) c.graph_layer = graph_layer_from_name(j.at("graph_layer"));
  if (j.contains("condition")) c.condition = condition_mode_from_name(j.at("condition"));
  c.shared_projections = j.value("shared_projections", c.shared_projections);
  c.validate();
  return c;
}

nlohmann::json ModelConfig::to_json() const {
  return {{"feature_width", feature_width},
          {"cell_width", cell_width},
          {"cell_stages", cell_stages},
          {"cell_context_width", cell_context_width},
          {"gat_hidden", gat_hidden},
          {"gat_heads", gat_heads},
          {"negative_slope", negative_slope},
          {"lstm_hidden", lstm_hidden},
          {"pool_width", pool_width},
          {"fusion_hidden", fusion_hidden},
          {"dropout", dropout},
          {"layer_norm_eps", layer_norm_eps},
          {"graph_layer", graph_layer_name(graph_layer)},
          {"condition", condition_mode_name(condition)},
          {"shared_projections", shared_projections}};
}

}  // namespace adgsyn::model
