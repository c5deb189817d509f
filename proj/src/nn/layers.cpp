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

#include "adgsyn/nn/layers.hpp"

#include <cmath>

namespace adgsyn::nn {

namespace {

Tensor glorot(int rows, int cols, RngStream& rng) {
  const float limit = std::sqrt(6.0f / static_cast<float>(rows + cols));
  std::vector<float> data(static_cast<std::size_t>(rows) * cols);
  for (float& v : data) v = static_cast<float>(rng.uniform(-limit, limit));
  Tensor t = Tensor::from_data(rows, cols, std::move(data));
  t.set_requires_grad(true);
  return t;
}

Tensor zero_param(int rows, int cols) {
  Tensor t = Tensor::zeros(rows, cols);
  t.set_requires_grad(true);
  return t;
}

}  // namespace

Linear Linear::init(int in, int out, bool with_bias, RngStream& rng) {
  Linear l;
  l.weight = glorot(in, out, rng);
  if (with_bias) l.bias = zero_param(1, out);
  return l;
}

Tensor Linear::forward(Tape& tape, const Tensor& x) const {
  Tensor y = tape.matmul(x, weight);
  if (bias.defined()) y = tape.add(y, bias);
  return y;
}

void Linear::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  out.push_back({prefix + ".weight", weight});
  if (bias.defined()) out.push_back({prefix + ".bias", bias});
}

std::int64_t Linear::parameter_count() const {
  return weight.numel() + (bias.defined() ? bias.numel() : 0);
}

LayerNorm LayerNorm::init(int width) {
  LayerNorm ln;
  ln.gain = Tensor::full(1, width, 1.0f);
  ln.gain.set_requires_grad(true);
  ln.bias = zero_param(1, width);
  return ln;
}

void LayerNorm::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  out.push_back({prefix + ".gain", gain});
  out.push_back({prefix + ".bias", bias});
}

Tensor attention_mask_with_self_loops(const std::vector<std::uint8_t>& adjacency, int n) {
  std::vector<float> mask(static_cast<std::size_t>(n) * n, 0.0f);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || adjacency[static_cast<std::size_t>(i) * n + j] != 0) {
        mask[static_cast<std::size_t>(i) * n + j] = 1.0f;
      }
    }
  }
  return Tensor::from_data(n, n, std::move(mask));
}

Tensor normalized_propagation_matrix(const std::vector<std::uint8_t>& adjacency, int n) {
  std::vector<float> hat(static_cast<std::size_t>(n) * n, 0.0f);
  std::vector<float> degree(static_cast<std::size_t>(n), 0.0f);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const float a = (i == j || adjacency[static_cast<std::size_t>(i) * n + j] != 0) ? 1.0f : 0.0f;
      hat[static_cast<std::size_t>(i) * n + j] = a;
      degree[static_cast<std::size_t>(i)] += a;
    }
  }
  for (int i = 0; i < n; ++i) {
    const float di = 1.0f / std::sqrt(degree[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j) {
      const float dj = 1.0f / std::sqrt(degree[static_cast<std::size_t>(j)]);
      hat[static_cast<std::size_t>(i) * n + j] *= di * dj;
    }
  }
  return Tensor::from_data(n, n, std::move(hat));
}

GatLayer GatLayer::init(int in, int out, int heads, RngStream& rng, float negative_slope) {
  if (heads <= 0 || out % heads != 0) {
    throw_error(ErrorCode::ConfigInvalid,
                "GAT out width " + std::to_string(out) + " not divisible by " +
                    std::to_string(heads) + " heads");
  }
  GatLayer layer;
  layer.heads = heads;
  layer.negative_slope = negative_slope;
  const int per_head = out / heads;
  for (int h = 0; h < heads; ++h) {
    layer.head_weight.push_back(glorot(in, per_head, rng));
    layer.attn_src.push_back(glorot(per_head, 1, rng));
    layer.attn_dst.push_back(glorot(per_head, 1, rng));
  }
  return layer;
}

Tensor GatLayer::forward(Tape& tape, const Tensor& node_feats, const Tensor& mask) const {
  const int n = node_feats.rows();
  if (mask.rows() != n || mask.cols() != n) {
    throw_error(ErrorCode::ShapeMismatch,
                "GAT mask " + mask.shape_string() + " for " + std::to_string(n) + " nodes");
  }
  std::vector<Tensor> head_outputs;
  head_outputs.reserve(static_cast<std::size_t>(heads));
  for (int h = 0; h < heads; ++h) {
    const Tensor wx = tape.matmul(node_feats, head_weight[static_cast<std::size_t>(h)]);
    // e_ij = leaky(a_src . Wx_i + a_dst . Wx_j), built as an outer sum.
    const Tensor e_src = tape.matmul(wx, attn_src[static_cast<std::size_t>(h)]);  // n x 1
    const Tensor e_dst = tape.matmul(wx, attn_dst[static_cast<std::size_t>(h)]);  // n x 1
    const Tensor logits =
        tape.leaky_relu(tape.add(e_src, tape.reshape(e_dst, 1, n)), negative_slope);
    const Tensor alpha = tape.softmax_rows(logits, &mask);  // Single32 by policy
    head_outputs.push_back(tape.matmul(alpha, wx));
  }
  return head_outputs.size() == 1
             ? head_outputs.front()
             : tape.concat_cols(std::span<const Tensor>(head_outputs));
}

void GatLayer::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  for (int h = 0; h < heads; ++h) {
    const std::string head = prefix + ".head" + std::to_string(h);
    out.push_back({head + ".weight", head_weight[static_cast<std::size_t>(h)]});
    out.push_back({head + ".attn_src", attn_src[static_cast<std::size_t>(h)]});
    out.push_back({head + ".attn_dst", attn_dst[static_cast<std::size_t>(h)]});
  }
}

GcnLayer GcnLayer::init(int in, int out, RngStream& rng) {
  GcnLayer layer;
  layer.theta = glorot(in, out, rng);
  return layer;
}

Tensor GcnLayer::forward(Tape& tape, const Tensor& node_feats, const Tensor& prop) const {
  return tape.matmul(prop, tape.matmul(node_feats, theta));
}

void GcnLayer::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  out.push_back({prefix + ".theta", theta});
}

LstmCell LstmCell::init(int in, int hidden, RngStream& rng) {
  LstmCell cell;
  cell.hidden_size = hidden;
  cell.w_input = glorot(in, 4 * hidden, rng);
  cell.w_hidden = glorot(hidden, 4 * hidden, rng);
  cell.bias = zero_param(1, 4 * hidden);
  return cell;
}

LstmCell::State LstmCell::zero_state(int batch_rows) const {
  return State{Tensor::zeros(batch_rows, hidden_size), Tensor::zeros(batch_rows, hidden_size)};
}

LstmCell::State LstmCell::step(Tape& tape, const State& state, const Tensor& x) const {
  if (x.cols() != w_input.rows()) {
    throw_error(ErrorCode::ShapeMismatch,
                "LSTM input " + x.shape_string() + " vs weight " + w_input.shape_string());
  }
  const int h = hidden_size;
  const Tensor pre =
      tape.add(tape.add(tape.matmul(x, w_input), tape.matmul(state.h, w_hidden)), bias);
  const Tensor i_gate = tape.sigmoid(tape.slice_cols(pre, 0, h));
  const Tensor f_gate = tape.sigmoid(tape.slice_cols(pre, h, 2 * h));
  const Tensor g_cell = tape.tanh(tape.slice_cols(pre, 2 * h, 3 * h));
  const Tensor o_gate = tape.sigmoid(tape.slice_cols(pre, 3 * h, 4 * h));
  State next;
  next.c = tape.add(tape.mul(f_gate, state.c), tape.mul(i_gate, g_cell));
  next.h = tape.mul(o_gate, tape.tanh(next.c));
  return next;
}

void LstmCell::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  out.push_back({prefix + ".w_input", w_input});
  out.push_back({prefix + ".w_hidden", w_hidden});
  out.push_back({prefix + ".bias", bias});
}

}  // namespace adgsyn::nn
