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

#include "adgsyn/error.hpp"

namespace adgsyn {

/// Dynamic loss scale: always a positive power of two. Halves on overflow,
/// doubles after `growth_interval` consecutive clean steps.
struct LossScaler {
  double scale = 65536.0;  // 2^16
  int growth_interval = 2000;
  int steps_since_overflow = 0;

  static constexpr double kMinScale = 5.9604644775390625e-08;  // 2^-24
};

/// Applies the overflow/growth rule. Throws ScaleUnderflow when the scale
/// would drop below 2^-24 (a sign of divergent training).
void scaler_update(LossScaler& scaler, bool grads_valid);

}  // namespace adgsyn
