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

#include "adgsyn/model/pool.hpp"

#include <cmath>

namespace adgsyn::model {

DualAttention DualAttention::init(int input_width, int proj_width, bool shared, float dropout,
                                  RngStream& rng, float layer_norm_eps) {
  DualAttention da;
  da.input_width = input_width;
  da.proj_width = proj_width;
  da.shared = shared;
  da.wq = nn::Linear::init(input_width, proj_width, false, rng);
  da.wk = nn::Linear::init(input_width, proj_width, false, rng);
  da.wv = nn::Linear::init(input_width, proj_width, false, rng);
  if (!shared) {
    da.wq2 = nn::Linear::init(input_width, proj_width, false, rng);
    da.wk2 = nn::Linear::init(input_width, proj_width, false, rng);
    da.wv2 = nn::Linear::init(input_width, proj_width, false, rng);
  }
  da.norm = nn::LayerNorm::init(proj_width);
  da.norm.eps = layer_norm_eps;
  da.drop.rate = dropout;
  return da;
}

DualAttention::Projected DualAttention::project(Tape& tape, const Tensor& x, int side) const {
  if (x.cols() != input_width) {
    throw_error(ErrorCode::ShapeMismatch,
                "pool projection expects width " + std::to_string(input_width) + ", got " +
                    x.shape_string());
  }
  const bool second = !shared && side == 1;
  Projected p;
  p.q = tape.relu((second ? wq2 : wq).forward(tape, x));
  p.k = tape.relu((second ? wk2 : wk).forward(tape, x));
  p.v = tape.relu((second ? wv2 : wv).forward(tape, x));
  return p;
}

Tensor DualAttention::cross_scores(Tape& tape, const Tensor& k, const Tensor& q) const {
  if (k.cols() != q.cols()) {
    throw_error(ErrorCode::ShapeMismatch,
                "cross scores: " + k.shape_string() + " vs " + q.shape_string());
  }
  const float inv_sqrt_d = 1.0f / std::sqrt(static_cast<float>(input_width));
  return tape.tanh(tape.scale(tape.matmul_nt(k, q), inv_sqrt_d));
}

Tensor DualAttention::node_weights(Tape& tape, const Tensor& scores,
                                   const std::vector<std::uint8_t>* keep) const {
  const int n = scores.rows();
  const Tensor summed = tape.reshape(tape.sum_cols(scores), 1, n);
  if (keep == nullptr) {
    return tape.softmax_rows(summed);
  }
  if (static_cast<int>(keep->size()) != n) {
    throw_error(ErrorCode::ShapeMismatch,
                "node mask has " + std::to_string(keep->size()) + " entries for " +
                    std::to_string(n) + " nodes");
  }
  std::vector<float> flags(keep->begin(), keep->end());
  const Tensor keep_row = Tensor::from_data(1, n, std::move(flags));
  return tape.softmax_rows(summed, &keep_row);
}

PooledPair DualAttention::pool(Tape& tape, const Tensor& x_nodes, const Tensor& y_nodes,
                               nn::Mode mode, RngStream& rng,
                               const std::vector<std::uint8_t>* mask_x,
                               const std::vector<std::uint8_t>* mask_y) const {
  if (x_nodes.rows() == 0 || y_nodes.rows() == 0) {
    throw_error(ErrorCode::EmptyGraph, "pooling needs non-empty node sets");
  }
  const Projected px = project(tape, x_nodes, 0);
  const Projected py = project(tape, y_nodes, 1);

  const Tensor scores_xy = cross_scores(tape, px.k, py.q);  // n_x x n_y
  const Tensor scores_yx = cross_scores(tape, py.k, px.q);  // n_y x n_x

  const Tensor a_x = node_weights(tape, scores_xy, mask_x);  // 1 x n_x
  const Tensor a_y = node_weights(tape, scores_yx, mask_y);  // 1 x n_y

  const bool train = mode == nn::Mode::Train;
  const Tensor ax_dropped = tape.dropout(a_x, drop.rate, train, rng);
  const Tensor ay_dropped = tape.dropout(a_y, drop.rate, train, rng);

  // Weighted node sum plus the dimension-wise V average; LayerNorm after the
  // residual addition.
  const Tensor zx = norm.forward(tape, tape.add(tape.matmul(ax_dropped, px.v),
                                                tape.mean_rows(px.v)));
  const Tensor zy = norm.forward(tape, tape.add(tape.matmul(ay_dropped, py.v),
                                                tape.mean_rows(py.v)));

  PooledPair out;
  out.z_x = zx;
  out.z_y = zy;
  out.attention_x = a_x.to_vector();
  out.attention_y = a_y.to_vector();
  return out;
}

std::int64_t DualAttention::projection_parameter_count() const {
  std::int64_t count = wq.parameter_count() + wk.parameter_count() + wv.parameter_count();
  if (!shared) {
    count += wq2.parameter_count() + wk2.parameter_count() + wv2.parameter_count();
  }
  return count;
}

void DualAttention::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  wq.collect(prefix + ".wq", out);
  wk.collect(prefix + ".wk", out);
  wv.collect(prefix + ".wv", out);
  if (!shared) {
    wq2.collect(prefix + ".wq2", out);
    wk2.collect(prefix + ".wk2", out);
    wv2.collect(prefix + ".wv2", out);
  }
  norm.collect(prefix + ".norm", out);
}

}  // namespace adgsyn::model
