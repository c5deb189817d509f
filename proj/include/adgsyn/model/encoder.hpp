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

#include "adgsyn/chem/featurize.hpp"
#include "adgsyn/model/config.hpp"
#include "adgsyn/nn/layers.hpp"

namespace adgsyn::model {

struct CellLineProfile {
  std::string id;
  std::vector<float> expression;
};

/// Stacked linear stages with ReLU + dropout between them; the final stage
/// is a plain linear map.
struct Mlp {
  std::vector<nn::Linear> stages;
  float dropout = 0.2f;

  static Mlp init(int in, const std::vector<int>& hidden, int out, float dropout,
                  RngStream& rng);
  Tensor forward(Tape& tape, const Tensor& x, nn::Mode mode, RngStream& rng) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

/// The two parallel cell-line reduction pathways: a context path ending at
/// 256 units for the fusion head and a node-conditioning path ending at the
/// atom-feature width.
struct CellProjector {
  Mlp context;
  Mlp node;

  static CellProjector init(const ModelConfig& config, RngStream& rng);
  Tensor project_context(Tape& tape, const Tensor& cell, nn::Mode mode, RngStream& rng) const {
    return context.forward(tape, cell, mode, rng);
  }
  Tensor project_node(Tape& tape, const Tensor& cell, nn::Mode mode, RngStream& rng) const {
    return node.forward(tape, cell, mode, rng);
  }
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

/// Mix the projected cell signal into every atom row: ADD keeps the 78-wide
/// rows; CONCAT widens them to 156. Throws WidthMismatch when the projector
/// output does not match the feature width in ADD mode.
Tensor condition_nodes(Tape& tape, const Tensor& atom_features, const Tensor& cell_projected,
                       ConditionMode mode);

/// Per-drug node embeddings: two stacked graph layers, with the per-node
/// layer-output sequence run through a bidirectional LSTM.
struct DrugEncoder {
  GraphLayerKind kind = GraphLayerKind::Gat;
  nn::GatLayer gat1, gat2;
  nn::GcnLayer gcn1, gcn2;
  nn::LstmCell lstm_fwd, lstm_bwd;

  struct NodeStreams {
    Tensor graph_nodes;  // n x gat_hidden, final graph-layer output
    Tensor lstm_nodes;   // n x 2*lstm_hidden, concatenated direction states
  };

  static DrugEncoder init(const ModelConfig& config, RngStream& rng);

  /// `conditioned` is the n x width output of condition_nodes. Throws
  /// EmptyGraph for molecules without atoms.
  NodeStreams encode(Tape& tape, const chem::MolecularGraph& graph,
                     const Tensor& conditioned) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

/// Both drugs of a pair through the shared encoder, conditioned on the same
/// cell line.
struct EncoderOutput {
  DrugEncoder::NodeStreams x;
  DrugEncoder::NodeStreams y;
};

}  // namespace adgsyn::model
