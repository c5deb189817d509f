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

namespace adgsyn {

// IEEE-754 binary16, emulated in software so results are bit-exact on any
// host. Encoding rounds to nearest-even; values past the finite range
// saturate to +/-infinity and report through `overflow`.

inline constexpr float kHalfMaxFinite = 65504.0f;

std::uint16_t half_encode(float value, bool* overflow = nullptr);
float half_decode(std::uint16_t bits);

/// Round a single-precision value to the nearest binary16-representable
/// value, returned as single precision. Idempotent.
float half_round(float value, bool* overflow = nullptr);

}  // namespace adgsyn
