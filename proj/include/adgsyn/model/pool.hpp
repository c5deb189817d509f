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

#include <cstdint>
#include <optional>
#include <vector>

#include "adgsyn/model/encoder.hpp"
#include "adgsyn/nn/layers.hpp"

namespace adgsyn::model {

struct PooledPair {
  Tensor z_x;  // 1 x proj_width
  Tensor z_y;
  std::vector<float> attention_x;  // per-node weights of drug x (sums to 1)
  std::vector<float> attention_y;
};

/// Cross-attention pooling between the two drugs' node sets. One set of
/// query/key/value projections serves both inputs (address-level sharing);
/// the unshared ablation carries a second set and exactly doubles the
/// projection parameter count. Scores are tanh(K_x Q_y^T / sqrt(d)); node
/// weights are the softmax of the score row-sums; the pooled vector is the
/// weighted node sum plus the dimension-wise V average, LayerNorm applied
/// after the residual addition.
struct DualAttention {
  int input_width = 0;
  int proj_width = 0;
  bool shared = true;
  nn::Linear wq, wk, wv;
  nn::Linear wq2, wk2, wv2;  // unshared ablation only
  nn::LayerNorm norm;
  nn::Dropout drop;

  static DualAttention init(int input_width, int proj_width, bool shared, float dropout,
                            RngStream& rng, float layer_norm_eps = 1e-5f);

  struct Projected {
    Tensor q, k, v;
  };
  /// ReLU-activated projections; `side` selects the second matrix set in the
  /// unshared ablation (0 = drug x, 1 = drug y).
  Projected project(Tape& tape, const Tensor& x, int side = 0) const;

  /// tanh(K Q^T / sqrt(input_width)), entries in (-1, 1).
  Tensor cross_scores(Tape& tape, const Tensor& k, const Tensor& q) const;

  /// Row-sum of the score matrix then softmax (Single32). `keep`, when
  /// given, holds one 0/1 flag per node; masked nodes get weight exactly 0.
  Tensor node_weights(Tape& tape, const Tensor& scores,
                      const std::vector<std::uint8_t>* keep = nullptr) const;

  PooledPair pool(Tape& tape, const Tensor& x_nodes, const Tensor& y_nodes, nn::Mode mode,
                  RngStream& rng, const std::vector<std::uint8_t>* mask_x = nullptr,
                  const std::vector<std::uint8_t>* mask_y = nullptr) const;

  /// Elements in the q/k/v projection matrices (the surface halved by sharing).
  std::int64_t projection_parameter_count() const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

}  // namespace adgsyn::model
