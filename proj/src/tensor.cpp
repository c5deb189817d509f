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

#include "adgsyn/tensor.hpp"

#include <algorithm>

#include "adgsyn/half.hpp"

namespace adgsyn {

const char* precision_name(Precision p) {
  return p == Precision::Half16 ? "half16" : "single32";
}

void MemoryLedger::on_alloc(Precision p, std::int64_t elements) {
  const std::int64_t b = elements * bytes_per_element(p);
  (p == Precision::Half16 ? half_bytes_ : single_bytes_) += b;
  total_ += b;
  peak_ = std::max(peak_, total_);
}

void MemoryLedger::on_free(Precision p, std::int64_t elements) {
  const std::int64_t b = elements * bytes_per_element(p);
  (p == Precision::Half16 ? half_bytes_ : single_bytes_) -= b;
  total_ -= b;
}

std::int64_t MemoryLedger::bytes(Precision p) const {
  return p == Precision::Half16 ? half_bytes_ : single_bytes_;
}

void MemoryLedger::reset() {
  half_bytes_ = single_bytes_ = total_ = peak_ = 0;
}

Tensor Tensor::make(int rows, int cols, Precision p) {
  Tensor t;
  t.impl_ = std::make_shared<Impl>();
  t.impl_->rows = rows;
  t.impl_->cols = cols;
  t.impl_->precision = p;
  t.impl_->data.assign(static_cast<std::size_t>(rows) * cols, 0.0f);
  return t;
}

Tensor Tensor::zeros(int rows, int cols, Precision p) { return make(rows, cols, p); }

Tensor Tensor::full(int rows, int cols, float value, Precision p) {
  Tensor t = make(rows, cols, p);
  const float v = p == Precision::Half16 ? half_round(value) : value;
  std::fill(t.impl_->data.begin(), t.impl_->data.end(), v);
  return t;
}

Tensor Tensor::from_data(int rows, int cols, std::vector<float> data, Precision p) {
  if (static_cast<std::int64_t>(data.size()) != static_cast<std::int64_t>(rows) * cols) {
    throw_error(ErrorCode::ShapeMismatch,
                "data length " + std::to_string(data.size()) + " does not fill " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  Tensor t;
  t.impl_ = std::make_shared<Impl>();
  t.impl_->rows = rows;
  t.impl_->cols = cols;
  t.impl_->precision = p;
  t.impl_->data = std::move(data);
  if (p == Precision::Half16) {
    for (float& v : t.impl_->data) v = half_round(v);
  }
  return t;
}

Tensor Tensor::scalar(float value) { return from_data(1, 1, {value}); }

Tensor Tensor::row(std::vector<float> data, Precision p) {
  const int n = static_cast<int>(data.size());
  return from_data(1, n, std::move(data), p);
}

float Tensor::item() const {
  if (!is_scalar()) {
    throw_error(ErrorCode::ShapeMismatch, "item() on non-scalar tensor " + shape_string());
  }
  return impl_->data[0];
}

Tensor& Tensor::set_requires_grad(bool v) {
  impl_->requires_grad = v;
  return *this;
}

void Tensor::ensure_grad() {
  if (!impl_->grad) {
    impl_->grad = std::make_unique<std::vector<float>>(impl_->data.size(), 0.0f);
  }
}

void Tensor::zero_grad() {
  if (impl_->grad) std::fill(impl_->grad->begin(), impl_->grad->end(), 0.0f);
}

void Tensor::drop_grad() { impl_->grad.reset(); }

std::string Tensor::shape_string() const {
  if (!defined()) return "(undefined)";
  return "(" + std::to_string(impl_->rows) + "x" + std::to_string(impl_->cols) + ")";
}

Tensor cast(const Tensor& t, Precision target, int* overflow_count) {
  Tensor out = Tensor::zeros(t.rows(), t.cols(), target);
  const float* src = t.data();
  float* dst = out.data();
  const std::int64_t n = t.numel();
  if (target == Precision::Half16) {
    int overflows = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      bool ov = false;
      dst[i] = half_round(src[i], &ov);
      overflows += ov ? 1 : 0;
    }
    if (overflow_count != nullptr) *overflow_count += overflows;
  } else {
    std::copy(src, src + n, dst);
  }
  return out;
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw_error(ErrorCode::ShapeMismatch,
                std::string(what) + ": " + a.shape_string() + " vs " + b.shape_string());
  }
}

}  // namespace adgsyn
