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

#include "adgsyn/model/encoder.hpp"

namespace adgsyn::model {

Mlp Mlp::init(int in, const std::vector<int>& hidden, int out, float dropout, RngStream& rng) {
  Mlp mlp;
  mlp.dropout = dropout;
  int width = in;
  for (int h : hidden) {
    mlp.stages.push_back(nn::Linear::init(width, h, true, rng));
    width = h;
  }
  mlp.stages.push_back(nn::Linear::init(width, out, true, rng));
  return mlp;
}

Tensor Mlp::forward(Tape& tape, const Tensor& x, nn::Mode mode, RngStream& rng) const {
  Tensor h = x;
  for (std::size_t s = 0; s + 1 < stages.size(); ++s) {
    h = tape.relu(stages[s].forward(tape, h));
    h = tape.dropout(h, dropout, mode == nn::Mode::Train, rng);
  }
  return stages.back().forward(tape, h);
}

void Mlp::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  for (std::size_t s = 0; s < stages.size(); ++s) {
    stages[s].collect(prefix + ".stage" + std::to_string(s), out);
  }
}

CellProjector CellProjector::init(const ModelConfig& config, RngStream& rng) {
  CellProjector p;
  p.context = Mlp::init(config.cell_width, config.cell_stages, config.cell_context_width,
                        config.dropout, rng);
  p.node = Mlp::init(config.cell_width, config.cell_stages, config.feature_width,
                     config.dropout, rng);
  return p;
}

void CellProjector::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  context.collect(prefix + ".context", out);
  node.collect(prefix + ".node", out);
}

Tensor condition_nodes(Tape& tape, const Tensor& atom_features, const Tensor& cell_projected,
                       ConditionMode mode) {
  if (cell_projected.rows() != 1) {
    throw_error(ErrorCode::WidthMismatch,
                "cell projection must be a row vector, got " + cell_projected.shape_string());
  }
  if (mode == ConditionMode::Add) {
    if (cell_projected.cols() != atom_features.cols()) {
      throw_error(ErrorCode::WidthMismatch,
                  "ADD conditioning: projector width " + std::to_string(cell_projected.cols()) +
                      " vs feature width " + std::to_string(atom_features.cols()));
    }
    return tape.add(atom_features, cell_projected);  // broadcast over rows
  }
  // CONCAT: tile the cell row to every atom row, then widen.
  const Tensor tiled =
      tape.add(Tensor::zeros(atom_features.rows(), cell_projected.cols()), cell_projected);
  return tape.concat_cols({atom_features, tiled});
}

DrugEncoder DrugEncoder::init(const ModelConfig& config, RngStream& rng) {
  DrugEncoder enc;
  enc.kind = config.graph_layer;
  const int in = config.conditioned_width();
  const int hidden = config.gat_hidden;
  if (config.graph_layer == GraphLayerKind::Gat) {
    enc.gat1 = nn::GatLayer::init(in, hidden, config.gat_heads, rng, config.negative_slope);
    enc.gat2 = nn::GatLayer::init(hidden, hidden, config.gat_heads, rng, config.negative_slope);
  } else {
    enc.gcn1 = nn::GcnLayer::init(in, hidden, rng);
    enc.gcn2 = nn::GcnLayer::init(hidden, hidden, rng);
  }
  enc.lstm_fwd = nn::LstmCell::init(hidden, config.lstm_hidden, rng);
  enc.lstm_bwd = nn::LstmCell::init(hidden, config.lstm_hidden, rng);
  return enc;
}

DrugEncoder::NodeStreams DrugEncoder::encode(Tape& tape, const chem::MolecularGraph& graph,
                                             const Tensor& conditioned) const {
  const int n = graph.atom_count();
  if (n == 0) throw_error(ErrorCode::EmptyGraph, "cannot encode a molecule without atoms");

  Tensor z1, z2;
  if (kind == GraphLayerKind::Gat) {
    const Tensor mask = nn::attention_mask_with_self_loops(graph.adjacency, n);
    z1 = tape.relu(gat1.forward(tape, conditioned, mask));
    z2 = gat2.forward(tape, z1, mask);
  } else {
    const Tensor prop = nn::normalized_propagation_matrix(graph.adjacency, n);
    z1 = tape.relu(gcn1.forward(tape, conditioned, prop));
    z2 = gcn2.forward(tape, z1, prop);
  }

  // Bidirectional LSTM over the per-node layer sequence [z1, z2].
  auto fwd = lstm_fwd.zero_state(n);
  fwd = lstm_fwd.step(tape, fwd, z1);
  fwd = lstm_fwd.step(tape, fwd, z2);
  auto bwd = lstm_bwd.zero_state(n);
  bwd = lstm_bwd.step(tape, bwd, z2);
  bwd = lstm_bwd.step(tape, bwd, z1);

  NodeStreams out;
  out.graph_nodes = z2;
  out.lstm_nodes = tape.concat_cols({fwd.h, bwd.h});
  return out;
}

void DrugEncoder::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  if (kind == GraphLayerKind::Gat) {
    gat1.collect(prefix + ".gat1", out);
    gat2.collect(prefix + ".gat2", out);
  } else {
    gcn1.collect(prefix + ".gcn1", out);
    gcn2.collect(prefix + ".gcn2", out);
  }
  lstm_fwd.collect(prefix + ".lstm_fwd", out);
  lstm_bwd.collect(prefix + ".lstm_bwd", out);
}

}  // namespace adgsyn::model
