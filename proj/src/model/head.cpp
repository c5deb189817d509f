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

#include "adgsyn/model/head.hpp"

#include <cmath>

namespace adgsyn::model {

FusionHead FusionHead::init(int pooled_width, int context_width, int hidden_units, float dropout,
                            RngStream& rng) {
  FusionHead head;
  head.hidden = nn::Linear::init(pooled_width + context_width, hidden_units, true, rng);
  head.out = nn::Linear::init(hidden_units, 2, true, rng);
  head.drop.rate = dropout;
  return head;
}

Tensor FusionHead::logits(Tape& tape, const Tensor& pooled, const Tensor& cell_context,
                          nn::Mode mode, RngStream& rng) const {
  if (pooled.cols() + cell_context.cols() != hidden.weight.rows()) {
    throw_error(ErrorCode::WidthMismatch,
                "fusion head expects " + std::to_string(hidden.weight.rows()) +
                    " inputs, got " + std::to_string(pooled.cols()) + "+" +
                    std::to_string(cell_context.cols()));
  }
  Tape::ScopedFullPrecision full(tape);  // classifier head stays Single32
  Tensor h = tape.concat_cols({pooled, cell_context});
  h = tape.relu(hidden.forward(tape, h));
  h = drop.apply(tape, h, mode, rng);
  return out.forward(tape, h);
}

void FusionHead::collect(const std::string& prefix, std::vector<NamedParam>& out_params) const {
  hidden.collect(prefix + ".hidden", out_params);
  out.collect(prefix + ".out", out_params);
}

double prob_from_logits(const Tensor& logits) {
  if (logits.rows() != 1 || logits.cols() != 2) {
    throw_error(ErrorCode::WidthMismatch, "expected 1x2 logits, got " + logits.shape_string());
  }
  const float a = logits.at(0, 0);
  const float b = logits.at(0, 1);
  const float mx = std::max(a, b);
  const float ea = std::exp(a - mx);
  const float eb = std::exp(b - mx);
  return static_cast<double>((kPositiveClass == 1 ? eb : ea) / (ea + eb));
}

Tensor HybridLoss::loss(Tape& tape, const Tensor& logits, int label) const {
  if (label != 0 && label != 1) {
    throw_error(ErrorCode::ConfigInvalid, "label must be 0 or 1, got " + std::to_string(label));
  }
  Tape::ScopedFullPrecision full(tape);
  const Tensor probs = tape.softmax_rows(logits);
  const Tensor one_hot =
      Tensor::from_data(1, 2, {label == 0 ? 1.0f : 0.0f, label == 1 ? 1.0f : 0.0f});
  const Tensor ce = tape.scale(tape.sum(tape.mul(one_hot, tape.log(probs))), -1.0f);
  if (mse_weight == 0.0f) {
    return tape.scale(ce, ce_weight);
  }
  const Tensor diff = tape.sub(probs, one_hot);
  const Tensor mse = tape.mean(tape.mul(diff, diff));
  return tape.add(tape.scale(ce, ce_weight), tape.scale(mse, mse_weight));
}

}  // namespace adgsyn::model
