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

#include "adgsyn/half.hpp"

#include <bit>
#include <cstring>

namespace adgsyn {

namespace {

constexpr std::uint32_t kF32SignMask = 0x80000000u;
constexpr std::uint32_t kF32AbsMask = 0x7FFFFFFFu;
constexpr std::uint32_t kF32InfBits = 0x7F800000u;

}  // namespace

std::uint16_t half_encode(float value, bool* overflow) {
  if (overflow != nullptr) *overflow = false;

  const std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
  const std::uint16_t sign = static_cast<std::uint16_t>((bits & kF32SignMask) >> 16);
  const std::uint32_t abs = bits & kF32AbsMask;

  if (abs > kF32InfBits) {
    return static_cast<std::uint16_t>(sign | 0x7E00u);  // canonical quiet NaN
  }
  if (abs == kF32InfBits) {
    return static_cast<std::uint16_t>(sign | 0x7C00u);
  }

  const int exp32 = static_cast<int>(abs >> 23);   // biased
  const std::uint32_t man32 = abs & 0x7FFFFFu;
  const int unbiased = exp32 - 127;

  if (unbiased >= 16) {
    // Magnitude is at least 2^16 = 65536 > 65504: rounds to infinity.
    if (overflow != nullptr) *overflow = true;
    return static_cast<std::uint16_t>(sign | 0x7C00u);
  }

  if (unbiased >= -14) {
    // Normal half range; 13 mantissa bits are dropped with round-to-nearest-even.
    std::uint32_t mant = man32 >> 13;
    const std::uint32_t rest = man32 & 0x1FFFu;
    if (rest > 0x1000u || (rest == 0x1000u && (mant & 1u))) ++mant;
    std::uint32_t hexp = static_cast<std::uint32_t>(unbiased + 15);
    if (mant == 0x400u) {  // mantissa carry
      mant = 0;
      ++hexp;
    }
    if (hexp >= 31) {
      if (overflow != nullptr) *overflow = true;
      return static_cast<std::uint16_t>(sign | 0x7C00u);
    }
    return static_cast<std::uint16_t>(sign | (hexp << 10) | mant);
  }

  // Subnormal half (or underflow to zero). Denormalize the full 24-bit
  // significand and round the shifted-out bits to nearest-even.
  if (unbiased < -25) {
    return sign;  // too small even for the halfway case
  }
  std::uint32_t significand = 0x800000u | man32;
  const int shift = 13 + (-14 - unbiased);  // 14..24
  std::uint32_t mant = significand >> shift;
  const std::uint32_t rest = significand & ((1u << shift) - 1u);
  const std::uint32_t halfway = 1u << (shift - 1);
  if (rest > halfway || (rest == halfway && (mant & 1u))) ++mant;
  // mant may carry into the smallest normal (exp field 1), which the
  // bit layout represents correctly without special casing.
  return static_cast<std::uint16_t>(sign | mant);
}

float half_decode(std::uint16_t bits) {
  const std::uint32_t sign = static_cast<std::uint32_t>(bits & 0x8000u) << 16;
  const std::uint32_t exp = (bits >> 10) & 0x1Fu;
  const std::uint32_t mant = bits & 0x3FFu;

  std::uint32_t out;
  if (exp == 0) {
    if (mant == 0) {
      out = sign;  // signed zero
    } else {
      // Subnormal: normalize into the float32 format.
      int e = -1;
      std::uint32_t m = mant;
      do {
        ++e;
        m <<= 1;
      } while ((m & 0x400u) == 0);
      out = sign | static_cast<std::uint32_t>(127 - 15 - e) << 23 | ((m & 0x3FFu) << 13);
    }
  } else if (exp == 31) {
    out = sign | kF32InfBits | (mant << 13);
  } else {
    out = sign | ((exp - 15 + 127) << 23) | (mant << 13);
  }
  return std::bit_cast<float>(out);
}

float half_round(float value, bool* overflow) {
  return half_decode(half_encode(value, overflow));
}

}  // namespace adgsyn
