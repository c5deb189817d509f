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

#include "adgsyn/amp.hpp"

namespace adgsyn {

void scaler_update(LossScaler& scaler, bool grads_valid) {
  if (!grads_valid) {
    const double next = scaler.scale * 0.5;
    if (next < LossScaler::kMinScale) {
      throw_error(ErrorCode::ScaleUnderflow,
                  "loss scale would fall below 2^-24; training is diverging");
    }
    scaler.scale = next;
    scaler.steps_since_overflow = 0;
    return;
  }
  ++scaler.steps_since_overflow;
  if (scaler.steps_since_overflow >= scaler.growth_interval) {
    scaler.scale *= 2.0;
    scaler.steps_since_overflow = 0;
  }
}

}  // namespace adgsyn
