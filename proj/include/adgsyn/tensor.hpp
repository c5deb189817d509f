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
#include <memory>
#include <string>
#include <vector>

#include "adgsyn/error.hpp"

namespace adgsyn {

enum class Precision : std::uint8_t { Half16 = 0, Single32 = 1 };

inline std::int64_t bytes_per_element(Precision p) {
  return p == Precision::Half16 ? 2 : 4;
}
const char* precision_name(Precision p);

/// Logical byte accounting by precision. Half16 tensors are stored as
/// rounded floats for portability, but the ledger charges them the two
/// bytes per element they would occupy on real hardware; that is the
/// measurable surface of the mixed-precision memory claim.
class MemoryLedger {
 public:
  void on_alloc(Precision p, std::int64_t elements);
  void on_free(Precision p, std::int64_t elements);

  std::int64_t bytes(Precision p) const;
  std::int64_t total_bytes() const { return total_; }
  std::int64_t peak_bytes() const { return peak_; }
  void reset();

 private:
  std::int64_t half_bytes_ = 0;
  std::int64_t single_bytes_ = 0;
  std::int64_t total_ = 0;
  std::int64_t peak_ = 0;
};

class Tape;

/// Dense row-major 2-D array with a precision tag and an optional gradient
/// buffer. Copies are shallow; data and grad are shared. Gradients are
/// always Single32 regardless of the value precision.
///
/// Half16 tensors hold float values that are exactly representable in
/// binary16 (arithmetic is emulated: compute in Single32, round results).
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(int rows, int cols, Precision p = Precision::Single32);
  static Tensor full(int rows, int cols, float value, Precision p = Precision::Single32);
  static Tensor from_data(int rows, int cols, std::vector<float> data,
                          Precision p = Precision::Single32);
  static Tensor scalar(float value);
  static Tensor row(std::vector<float> data, Precision p = Precision::Single32);

  bool defined() const { return impl_ != nullptr; }
  int rows() const { return impl_->rows; }
  int cols() const { return impl_->cols; }
  std::int64_t numel() const { return static_cast<std::int64_t>(impl_->rows) * impl_->cols; }
  bool is_scalar() const { return defined() && impl_->rows == 1 && impl_->cols == 1; }

  float* data() { return impl_->data.data(); }
  const float* data() const { return impl_->data.data(); }
  float at(int r, int c) const { return impl_->data[static_cast<std::size_t>(r) * impl_->cols + c]; }
  float item() const;
  std::vector<float> to_vector() const { return impl_->data; }

  Precision precision() const { return impl_->precision; }

  bool requires_grad() const { return defined() && impl_->requires_grad; }
  Tensor& set_requires_grad(bool v);

  bool has_grad() const { return defined() && impl_->grad != nullptr; }
  float* grad() { return impl_->grad->data(); }
  const float* grad() const { return impl_->grad->data(); }
  std::vector<float>& grad_vector() { return *impl_->grad; }
  void ensure_grad();
  void zero_grad();
  void drop_grad();

  /// Identity of the shared buffer, used to deduplicate gradient sweeps.
  const void* id() const { return impl_.get(); }

  std::string shape_string() const;

 private:
  friend class Tape;

  struct Impl {
    int rows = 0;
    int cols = 0;
    std::vector<float> data;
    Precision precision = Precision::Single32;
    bool requires_grad = false;
    std::unique_ptr<std::vector<float>> grad;
    // Set when the tensor is the output of a recorded tape node.
    const Tape* tape = nullptr;
    std::int64_t node = -1;
  };

  std::shared_ptr<Impl> impl_;

  static Tensor make(int rows, int cols, Precision p);
};

/// Explicit precision conversion. Rounds to nearest-even when narrowing;
/// overflowing magnitudes saturate to +/-infinity and bump `overflow_count`
/// instead of raising.
Tensor cast(const Tensor& t, Precision target, int* overflow_count = nullptr);

void check_same_shape(const Tensor& a, const Tensor& b, const char* what);

}  // namespace adgsyn
