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

#include "adgsyn/nn/layers.hpp"

namespace adgsyn::model {

/// Positive (synergistic) class index, fixed project-wide.
inline constexpr int kPositiveClass = 1;

/// Fusion classifier: [pooled || cell context] -> hidden ReLU + dropout ->
/// 2 logits. Runs under forced Single32 regardless of the AMP policy.
struct FusionHead {
  nn::Linear hidden;
  nn::Linear out;
  nn::Dropout drop;

  static FusionHead init(int pooled_width, int context_width, int hidden_units, float dropout,
                         RngStream& rng);

  Tensor logits(Tape& tape, const Tensor& pooled, const Tensor& cell_context, nn::Mode mode,
                RngStream& rng) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out_params) const;
};

/// prob of the positive class from a 1x2 logit row, softmax in Single32.
double prob_from_logits(const Tensor& logits);

/// Cross-entropy plus weighted mean-squared error between the softmax
/// probabilities and the one-hot label, both terms Single32.
struct HybridLoss {
  float ce_weight = 1.0f;
  float mse_weight = 0.1f;

  Tensor loss(Tape& tape, const Tensor& logits, int label) const;
};

}  // namespace adgsyn::model
