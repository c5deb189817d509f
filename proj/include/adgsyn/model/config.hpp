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
#include <vector>

#include <nlohmann/json.hpp>

namespace adgsyn::model {

enum class GraphLayerKind { Gat, Gcn };
enum class ConditionMode { Add, Concat };

const char* graph_layer_name(GraphLayerKind k);
const char* condition_mode_name(ConditionMode m);
GraphLayerKind graph_layer_from_name(const std::string& name);
ConditionMode condition_mode_from_name(const std::string& name);

/// Architecture hyperparameters. Defaults are the published configuration:
/// two 4-head graph attention layers 78 -> 128 -> 128, bidirectional LSTM
/// with 128 hidden units per direction, dual-attention pooling to four
/// 128-wide graph vectors, 954 -> 2048 -> 512 -> {256,78} cell reduction
/// MLPs, and a 64-unit fusion head with 2-class output.
struct ModelConfig {
  int feature_width = 78;
  int cell_width = 954;
  std::vector<int> cell_stages = {2048, 512};
  int cell_context_width = 256;
  int gat_hidden = 128;
  int gat_heads = 4;
  float negative_slope = 0.2f;
  int lstm_hidden = 128;
  int pool_width = 128;
  int fusion_hidden = 64;
  float dropout = 0.2f;
  float layer_norm_eps = 1e-5f;
  GraphLayerKind graph_layer = GraphLayerKind::Gat;
  ConditionMode condition = ConditionMode::Add;
  bool shared_projections = true;

  /// Node width entering the first graph layer (feature_width doubled in
  /// CONCAT conditioning mode).
  int conditioned_width() const {
    return condition == ConditionMode::Concat ? 2 * feature_width : feature_width;
  }
  /// Width of the LSTM node stream (both directions concatenated).
  int lstm_stream_width() const { return 2 * lstm_hidden; }
  int pooled_width() const { return 4 * pool_width; }

  void validate() const;

  static ModelConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

}  // namespace adgsyn::model
