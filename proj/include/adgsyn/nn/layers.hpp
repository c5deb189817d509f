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
#include <string>
#include <vector>

#include "adgsyn/autodiff.hpp"
#include "adgsyn/checkpoint.hpp"
#include "adgsyn/rng.hpp"

namespace adgsyn::nn {

enum class Mode { Train, Eval };

/// Glorot-uniform initialized matrix in x out; master weights are Single32,
/// half-precision compute shadows materialize per forward through the tape's
/// precision policy.
struct Linear {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out; undefined when bias-free

  static Linear init(int in, int out, bool with_bias, RngStream& rng);

  Tensor forward(Tape& tape, const Tensor& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
  std::int64_t parameter_count() const;
};

struct LayerNorm {
  Tensor gain;  // 1 x d
  Tensor bias;  // 1 x d
  float eps = 1e-5f;

  static LayerNorm init(int width);

  Tensor forward(Tape& tape, const Tensor& x) const {
    return tape.layer_norm(x, gain, bias, eps);
  }
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

struct Dropout {
  float rate = 0.2f;

  Tensor apply(Tape& tape, const Tensor& x, Mode mode, RngStream& rng) const {
    return tape.dropout(x, rate, mode == Mode::Train, rng);
  }
};

/// Boolean node masks as 0/1 constants for attention softmax. Self loops
/// are always present so no neighborhood is empty.
Tensor attention_mask_with_self_loops(const std::vector<std::uint8_t>& adjacency, int n);

/// Symmetric-normalized propagation matrix D^-1/2 (A+I) D^-1/2.
Tensor normalized_propagation_matrix(const std::vector<std::uint8_t>& adjacency, int n);

/// Multi-head graph attention. Per head: e_ij = leakyReLU(a^T [W x_i || W x_j])
/// over j in N(i) plus the self loop, attention normalized row-wise in
/// Single32, outputs concatenated across heads. The caller applies the
/// nonlinearity.
struct GatLayer {
  int heads = 1;
  float negative_slope = 0.2f;
  std::vector<Tensor> head_weight;  // in x (out/heads) each
  std::vector<Tensor> attn_src;     // (out/heads) x 1
  std::vector<Tensor> attn_dst;     // (out/heads) x 1

  static GatLayer init(int in, int out, int heads, RngStream& rng, float negative_slope = 0.2f);

  /// `mask` from attention_mask_with_self_loops for the molecule.
  Tensor forward(Tape& tape, const Tensor& node_feats, const Tensor& mask) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

/// The literal symmetric-normalized propagation path phi(D^-1/2 A^ D^-1/2 Z Theta),
/// selectable instead of GAT. The caller applies phi.
struct GcnLayer {
  Tensor theta;  // in x out

  static GcnLayer init(int in, int out, RngStream& rng);

  /// `prop` from normalized_propagation_matrix for the molecule.
  Tensor forward(Tape& tape, const Tensor& node_feats, const Tensor& prop) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

/// Standard LSTM cell with fused gate weights, gate order (i, f, g, o).
struct LstmCell {
  Tensor w_input;   // in x 4h
  Tensor w_hidden;  // h x 4h
  Tensor bias;      // 1 x 4h
  int hidden_size = 0;

  struct State {
    Tensor h;
    Tensor c;
  };

  static LstmCell init(int in, int hidden, RngStream& rng);

  State zero_state(int batch_rows) const;
  State step(Tape& tape, const State& state, const Tensor& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

}  // namespace adgsyn::nn
