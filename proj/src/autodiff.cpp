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

#include "adgsyn/autodiff.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_set>

#include "adgsyn/amp.hpp"
#include "adgsyn/half.hpp"
#include "adgsyn/kernels.hpp"

namespace adgsyn {

namespace {

constexpr std::uint64_t bit(OpKind k) { return 1ull << static_cast<int>(k); }

// View of a tensor's values on the binary16 grid. Tensors already tagged
// Half16 hold rounded data; Single32 inputs to half-mode ops are rounded
// into scratch without touching the master copy.
const float* rounded_view(const Tensor& t, std::vector<float>& scratch, int* overflow_count) {
  if (t.precision() == Precision::Half16) return t.data();
  const std::int64_t n = t.numel();
  scratch.resize(static_cast<std::size_t>(n));
  int overflows = 0;
  const float* src = t.data();
  for (std::int64_t i = 0; i < n; ++i) {
    bool ov = false;
    scratch[i] = half_round(src[i], &ov);
    overflows += ov ? 1 : 0;
  }
  if (overflow_count != nullptr) *overflow_count += overflows;
  return scratch.data();
}

// Accumulates a same-shape gradient contribution. Half-mode contributions
// are rounded to binary16 first (the emulated fp16 gradient tensor);
// accumulation itself stays Single32.
void accumulate(Tensor t, const float* contrib, bool half_mode) {
  if (!t.requires_grad()) return;
  t.ensure_grad();
  float* g = t.grad();
  const std::int64_t n = t.numel();
  if (half_mode) {
    for (std::int64_t i = 0; i < n; ++i) g[i] += half_round(contrib[i]);
  } else {
    for (std::int64_t i = 0; i < n; ++i) g[i] += contrib[i];
  }
}

// Accumulates a full broadcast-shape (R x C) contribution into a possibly
// smaller operand, summing over the broadcast dimensions.
void accumulate_reduced(Tensor t, const std::vector<float>& full, int R, int C, bool half_mode) {
  if (!t.requires_grad()) return;
  t.ensure_grad();
  float* g = t.grad();
  const int tr = t.rows(), tc = t.cols();
  for (int i = 0; i < R; ++i) {
    const int ti = tr == 1 ? 0 : i;
    for (int j = 0; j < C; ++j) {
      const int tj = tc == 1 ? 0 : j;
      float v = full[static_cast<std::size_t>(i) * C + j];
      if (half_mode) v = half_round(v);
      g[static_cast<std::size_t>(ti) * tc + tj] += v;
    }
  }
}

inline float broadcast_at(const float* p, int rows, int cols, int i, int j) {
  return p[static_cast<std::size_t>(rows == 1 ? 0 : i) * cols + (cols == 1 ? 0 : j)];
}

float f_relu(float x, float) { return x > 0.0f ? x : 0.0f; }
float df_relu(float x, float, float) { return x > 0.0f ? 1.0f : 0.0f; }
float f_leaky(float x, float s) { return x > 0.0f ? x : s * x; }
float df_leaky(float x, float, float s) { return x > 0.0f ? 1.0f : s; }
float f_tanh(float x, float) { return std::tanh(x); }
float df_tanh(float, float y, float) { return 1.0f - y * y; }
float f_sigmoid(float x, float) { return 1.0f / (1.0f + std::exp(-x)); }
float df_sigmoid(float, float y, float) { return y * (1.0f - y); }
float f_exp(float x, float) { return std::exp(x); }
float df_exp(float, float y, float) { return y; }
float f_log(float x, float) { return std::log(x); }
float df_log(float x, float, float) { return 1.0f / x; }

}  // namespace

PrecisionPolicy PrecisionPolicy::full32() {
  PrecisionPolicy p;
  p.half_ops = 0;
  p.full_ops = (1ull << static_cast<int>(OpKind::kCount)) - 1;
  return p;
}

PrecisionPolicy PrecisionPolicy::mixed() {
  PrecisionPolicy p;
  p.half_ops = bit(OpKind::MatMul) | bit(OpKind::MatMulNT) | bit(OpKind::Add) |
               bit(OpKind::Sub) | bit(OpKind::Mul) | bit(OpKind::Scale) |
               bit(OpKind::Relu) | bit(OpKind::LeakyRelu) | bit(OpKind::Tanh) |
               bit(OpKind::Sigmoid);
  p.full_ops = bit(OpKind::SoftmaxRows) | bit(OpKind::LayerNorm) | bit(OpKind::Sum) |
               bit(OpKind::Mean) | bit(OpKind::SumCols) | bit(OpKind::MeanRows) |
               bit(OpKind::Exp) | bit(OpKind::Log) | bit(OpKind::Cast);
  p.validate();
  return p;
}

void PrecisionPolicy::validate() const {
  if ((half_ops & full_ops) != 0) {
    throw_error(ErrorCode::ConfigInvalid, "precision policy: half_ops and full_ops overlap");
  }
  const std::uint64_t mandatory_full =
      bit(OpKind::SoftmaxRows) | bit(OpKind::Sum) | bit(OpKind::Mean) |
      bit(OpKind::SumCols) | bit(OpKind::MeanRows) | bit(OpKind::LayerNorm);
  if ((half_ops & mandatory_full) != 0) {
    throw_error(ErrorCode::ConfigInvalid,
                "precision policy: softmax normalization and reductions must stay Single32");
  }
}

Tape::Tape(PrecisionPolicy policy) : policy_(policy) { policy_.validate(); }

void Tape::set_policy(PrecisionPolicy p) {
  p.validate();
  policy_ = p;
}

void Tape::reset() {
  for (const auto& [prec, elems] : alloc_log_) ledger_.on_free(prec, elems);
  alloc_log_.clear();
  nodes_.clear();
}

Tensor Tape::alloc(int rows, int cols, Precision p) {
  Tensor t = Tensor::make(rows, cols, p);
  ledger_.on_alloc(p, static_cast<std::int64_t>(rows) * cols);
  alloc_log_.emplace_back(p, static_cast<std::int64_t>(rows) * cols);
  return t;
}

void Tape::round_output(Tensor& t) {
  float* d = t.data();
  const std::int64_t n = t.numel();
  int overflows = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    bool ov = false;
    d[i] = half_round(d[i], &ov);
    overflows += ov ? 1 : 0;
  }
  overflow_events_ += overflows;
}

const float* Tape::half_view(const Tensor& t, std::vector<float>& scratch) {
  return rounded_view(t, scratch, &overflow_events_);
}

void Tape::record(std::vector<Tensor> inputs, Tensor& out, bool half_mode,
                  std::function<void()> fn) {
  if (!recording_) return;
  bool needs_grad = false;
  for (const auto& t : inputs) needs_grad = needs_grad || t.requires_grad();
  out.impl_->tape = this;
  out.impl_->node = static_cast<std::int64_t>(nodes_.size());
  out.impl_->requires_grad = needs_grad;
  nodes_.push_back(Node{std::move(inputs), out, needs_grad ? std::move(fn) : nullptr, half_mode});
}

// --- primitives -----------------------------------------------------------

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw_error(ErrorCode::ShapeMismatch,
                "matmul: " + a.shape_string() + " x " + b.shape_string());
  }
  const bool half = run_half(OpKind::MatMul);
  const int m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<float> sa, sb;
  const float* pa = half ? half_view(a, sa) : a.data();
  const float* pb = half ? half_view(b, sb) : b.data();
  Tensor out = alloc(m, n, half ? Precision::Half16 : Precision::Single32);
  kern::matmul(pa, pb, out.data(), m, k, n);
  if (half) round_output(out);

  record({a, b}, out, half, [a, b, out, half, m, k, n]() {
    std::vector<float> sa2, sb2;
    const float* pa2 = half ? rounded_view(a, sa2, nullptr) : a.data();
    const float* pb2 = half ? rounded_view(b, sb2, nullptr) : b.data();
    const float* g = out.grad();
    if (a.requires_grad()) {
      std::vector<float> da(static_cast<std::size_t>(m) * k);
      kern::matmul_nt(g, pb2, da.data(), m, n, k);  // dC (m x n) * B^T
      accumulate(a, da.data(), half);
    }
    if (b.requires_grad()) {
      std::vector<float> db(static_cast<std::size_t>(k) * n);
      kern::matmul_tn(pa2, g, db.data(), k, m, n);  // A^T * dC
      accumulate(b, db.data(), half);
    }
  });
  return out;
}

Tensor Tape::matmul_nt(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) {
    throw_error(ErrorCode::ShapeMismatch,
                "matmul_nt: " + a.shape_string() + " x " + b.shape_string() + "^T");
  }
  const bool half = run_half(OpKind::MatMulNT);
  const int m = a.rows(), k = a.cols(), n = b.rows();
  std::vector<float> sa, sb;
  const float* pa = half ? half_view(a, sa) : a.data();
  const float* pb = half ? half_view(b, sb) : b.data();
  Tensor out = alloc(m, n, half ? Precision::Half16 : Precision::Single32);
  kern::matmul_nt(pa, pb, out.data(), m, k, n);
  if (half) round_output(out);

  record({a, b}, out, half, [a, b, out, half, m, k, n]() {
    std::vector<float> sa2, sb2;
    const float* pa2 = half ? rounded_view(a, sa2, nullptr) : a.data();
    const float* pb2 = half ? rounded_view(b, sb2, nullptr) : b.data();
    const float* g = out.grad();
    if (a.requires_grad()) {
      std::vector<float> da(static_cast<std::size_t>(m) * k);
      kern::matmul(g, pb2, da.data(), m, n, k);  // dC * B
      accumulate(a, da.data(), half);
    }
    if (b.requires_grad()) {
      std::vector<float> db(static_cast<std::size_t>(n) * k);
      kern::matmul_tn(g, pa2, db.data(), n, m, k);  // dC^T * A
      accumulate(b, db.data(), half);
    }
  });
  return out;
}

Tensor Tape::binary(OpKind kind, const Tensor& a, const Tensor& b) {
  const int ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  const bool rows_ok = ar == br || ar == 1 || br == 1;
  const bool cols_ok = ac == bc || ac == 1 || bc == 1;
  if (!rows_ok || !cols_ok) {
    throw_error(ErrorCode::ShapeMismatch,
                "broadcast: " + a.shape_string() + " vs " + b.shape_string());
  }
  const int R = std::max(ar, br), C = std::max(ac, bc);
  const bool half = run_half(kind);
  std::vector<float> sa, sb;
  const float* pa = half ? half_view(a, sa) : a.data();
  const float* pb = half ? half_view(b, sb) : b.data();
  Tensor out = alloc(R, C, half ? Precision::Half16 : Precision::Single32);
  float* po = out.data();
  for (int i = 0; i < R; ++i) {
    for (int j = 0; j < C; ++j) {
      const float av = broadcast_at(pa, ar, ac, i, j);
      const float bv = broadcast_at(pb, br, bc, i, j);
      float v = 0.0f;
      switch (kind) {
        case OpKind::Add: v = av + bv; break;
        case OpKind::Sub: v = av - bv; break;
        case OpKind::Mul: v = av * bv; break;
        default: break;
      }
      po[static_cast<std::size_t>(i) * C + j] = v;
    }
  }
  if (half) round_output(out);

  record({a, b}, out, half, [kind, a, b, out, half, R, C]() {
    const float* g = out.grad();
    const std::size_t total = static_cast<std::size_t>(R) * C;
    std::vector<float> sa2, sb2;
    const float* pa2 = half ? rounded_view(a, sa2, nullptr) : a.data();
    const float* pb2 = half ? rounded_view(b, sb2, nullptr) : b.data();
    if (a.requires_grad()) {
      std::vector<float> da(total);
      for (int i = 0; i < R; ++i) {
        for (int j = 0; j < C; ++j) {
          const std::size_t idx = static_cast<std::size_t>(i) * C + j;
          switch (kind) {
            case OpKind::Add:
            case OpKind::Sub: da[idx] = g[idx]; break;
            case OpKind::Mul: da[idx] = g[idx] * broadcast_at(pb2, b.rows(), b.cols(), i, j); break;
            default: break;
          }
        }
      }
      accumulate_reduced(a, da, R, C, half);
    }
    if (b.requires_grad()) {
      std::vector<float> db(total);
      for (int i = 0; i < R; ++i) {
        for (int j = 0; j < C; ++j) {
          const std::size_t idx = static_cast<std::size_t>(i) * C + j;
          switch (kind) {
            case OpKind::Add: db[idx] = g[idx]; break;
            case OpKind::Sub: db[idx] = -g[idx]; break;
            case OpKind::Mul: db[idx] = g[idx] * broadcast_at(pa2, a.rows(), a.cols(), i, j); break;
            default: break;
          }
        }
      }
      accumulate_reduced(b, db, R, C, half);
    }
  });
  return out;
}

Tensor Tape::add(const Tensor& a, const Tensor& b) { return binary(OpKind::Add, a, b); }
Tensor Tape::sub(const Tensor& a, const Tensor& b) { return binary(OpKind::Sub, a, b); }
Tensor Tape::mul(const Tensor& a, const Tensor& b) { return binary(OpKind::Mul, a, b); }

Tensor Tape::scale(const Tensor& a, float c) {
  const bool half = run_half(OpKind::Scale);
  std::vector<float> sa;
  const float* pa = half ? half_view(a, sa) : a.data();
  Tensor out = alloc(a.rows(), a.cols(), half ? Precision::Half16 : Precision::Single32);
  float* po = out.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; ++i) po[i] = c * pa[i];
  if (half) round_output(out);

  record({a}, out, half, [a, out, half, c, n]() {
    const float* g = out.grad();
    std::vector<float> da(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) da[i] = c * g[i];
    accumulate(a, da.data(), half);
  });
  return out;
}

Tensor Tape::unary(OpKind kind, const Tensor& a, float (*f)(float, float),
                   float (*df)(float, float, float), float param) {
  const bool half = run_half(kind);
  std::vector<float> sa;
  const float* pa = half ? half_view(a, sa) : a.data();
  Tensor out = alloc(a.rows(), a.cols(), half ? Precision::Half16 : Precision::Single32);
  float* po = out.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; ++i) po[i] = f(pa[i], param);
  if (half) round_output(out);

  record({a}, out, half, [a, out, half, df, param, n]() {
    const float* g = out.grad();
    const float* y = out.data();
    std::vector<float> sa2;
    const float* x = half ? rounded_view(a, sa2, nullptr) : a.data();
    std::vector<float> da(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) da[i] = g[i] * df(x[i], y[i], param);
    accumulate(a, da.data(), half);
  });
  return out;
}

Tensor Tape::relu(const Tensor& a) { return unary(OpKind::Relu, a, f_relu, df_relu, 0.0f); }
Tensor Tape::leaky_relu(const Tensor& a, float negative_slope) {
  return unary(OpKind::LeakyRelu, a, f_leaky, df_leaky, negative_slope);
}
Tensor Tape::tanh(const Tensor& a) { return unary(OpKind::Tanh, a, f_tanh, df_tanh, 0.0f); }
Tensor Tape::sigmoid(const Tensor& a) {
  return unary(OpKind::Sigmoid, a, f_sigmoid, df_sigmoid, 0.0f);
}
Tensor Tape::exp(const Tensor& a) { return unary(OpKind::Exp, a, f_exp, df_exp, 0.0f); }
Tensor Tape::log(const Tensor& a) { return unary(OpKind::Log, a, f_log, df_log, 0.0f); }

Tensor Tape::sum(const Tensor& a) {
  Tensor out = alloc(1, 1, Precision::Single32);
  const float* pa = a.data();
  float acc = 0.0f;
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; ++i) acc += pa[i];
  out.data()[0] = acc;

  record({a}, out, false, [a, out, n]() {
    const float g = out.grad()[0];
    std::vector<float> da(static_cast<std::size_t>(n), g);
    accumulate(a, da.data(), false);
  });
  return out;
}

Tensor Tape::mean(const Tensor& a) {
  Tensor out = alloc(1, 1, Precision::Single32);
  const float* pa = a.data();
  float acc = 0.0f;
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; ++i) acc += pa[i];
  out.data()[0] = acc / static_cast<float>(n);

  record({a}, out, false, [a, out, n]() {
    const float g = out.grad()[0] / static_cast<float>(n);
    std::vector<float> da(static_cast<std::size_t>(n), g);
    accumulate(a, da.data(), false);
  });
  return out;
}

Tensor Tape::sum_cols(const Tensor& a) {
  const int m = a.rows(), n = a.cols();
  Tensor out = alloc(m, 1, Precision::Single32);
  const float* pa = a.data();
  for (int i = 0; i < m; ++i) {
    float acc = 0.0f;
    for (int j = 0; j < n; ++j) acc += pa[static_cast<std::size_t>(i) * n + j];
    out.data()[i] = acc;
  }

  record({a}, out, false, [a, out, m, n]() {
    const float* g = out.grad();
    std::vector<float> da(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) da[static_cast<std::size_t>(i) * n + j] = g[i];
    }
    accumulate(a, da.data(), false);
  });
  return out;
}

Tensor Tape::mean_rows(const Tensor& a) {
  const int m = a.rows(), n = a.cols();
  Tensor out = alloc(1, n, Precision::Single32);
  const float* pa = a.data();
  for (int j = 0; j < n; ++j) {
    float acc = 0.0f;
    for (int i = 0; i < m; ++i) acc += pa[static_cast<std::size_t>(i) * n + j];
    out.data()[j] = acc / static_cast<float>(m);
  }

  record({a}, out, false, [a, out, m, n]() {
    const float* g = out.grad();
    const float invm = 1.0f / static_cast<float>(m);
    std::vector<float> da(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) da[static_cast<std::size_t>(i) * n + j] = g[j] * invm;
    }
    accumulate(a, da.data(), false);
  });
  return out;
}

Tensor Tape::concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) {
    throw_error(ErrorCode::ShapeMismatch, "concat_cols: no inputs");
  }
  const int m = parts[0].rows();
  int total = 0;
  bool all_half = true;
  for (const Tensor& p : parts) {
    if (p.rows() != m) {
      throw_error(ErrorCode::ShapeMismatch,
                  "concat_cols: row mismatch " + p.shape_string());
    }
    total += p.cols();
    all_half = all_half && p.precision() == Precision::Half16;
  }
  Tensor out = alloc(m, total, all_half ? Precision::Half16 : Precision::Single32);
  int off = 0;
  for (const Tensor& p : parts) {
    const int w = p.cols();
    for (int i = 0; i < m; ++i) {
      std::memcpy(out.data() + static_cast<std::size_t>(i) * total + off,
                  p.data() + static_cast<std::size_t>(i) * w, sizeof(float) * w);
    }
    off += w;
  }

  std::vector<Tensor> inputs(parts.begin(), parts.end());
  record(std::move(inputs), out, false, [out, m, total, ps = std::vector<Tensor>(parts.begin(), parts.end())]() {
    const float* g = out.grad();
    int off2 = 0;
    for (const Tensor& p : ps) {
      const int w = p.cols();
      if (p.requires_grad()) {
        std::vector<float> dp(static_cast<std::size_t>(m) * w);
        for (int i = 0; i < m; ++i) {
          std::memcpy(dp.data() + static_cast<std::size_t>(i) * w,
                      g + static_cast<std::size_t>(i) * total + off2, sizeof(float) * w);
        }
        accumulate(p, dp.data(), false);
      }
      off2 += w;
    }
  });
  return out;
}

Tensor Tape::concat_cols(std::initializer_list<Tensor> parts) {
  std::vector<Tensor> v(parts);
  return concat_cols(std::span<const Tensor>(v));
}

Tensor Tape::slice_cols(const Tensor& a, int col_begin, int col_end) {
  const int m = a.rows(), n = a.cols();
  if (col_begin < 0 || col_end > n || col_begin >= col_end) {
    throw_error(ErrorCode::ShapeMismatch,
                "slice_cols: [" + std::to_string(col_begin) + "," + std::to_string(col_end) +
                    ") of " + a.shape_string());
  }
  const int w = col_end - col_begin;
  Tensor out = alloc(m, w, a.precision());
  for (int i = 0; i < m; ++i) {
    std::memcpy(out.data() + static_cast<std::size_t>(i) * w,
                a.data() + static_cast<std::size_t>(i) * n + col_begin, sizeof(float) * w);
  }

  record({a}, out, false, [a, out, m, n, w, col_begin]() {
    const float* g = out.grad();
    std::vector<float> da(static_cast<std::size_t>(m) * n, 0.0f);
    for (int i = 0; i < m; ++i) {
      std::memcpy(da.data() + static_cast<std::size_t>(i) * n + col_begin,
                  g + static_cast<std::size_t>(i) * w, sizeof(float) * w);
    }
    accumulate(a, da.data(), false);
  });
  return out;
}

Tensor Tape::reshape(const Tensor& a, int rows, int cols) {
  if (static_cast<std::int64_t>(rows) * cols != a.numel()) {
    throw_error(ErrorCode::ShapeMismatch,
                "reshape: " + a.shape_string() + " to " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  Tensor out = alloc(rows, cols, a.precision());
  std::memcpy(out.data(), a.data(), sizeof(float) * static_cast<std::size_t>(a.numel()));

  record({a}, out, false, [a, out]() {
    accumulate(a, out.grad(), false);
  });
  return out;
}

Tensor Tape::softmax_rows(const Tensor& a, const Tensor* keep) {
  const int m = a.rows(), n = a.cols();
  if (keep != nullptr) check_same_shape(a, *keep, "softmax mask");
  Tensor out = alloc(m, n, Precision::Single32);
  const float* pa = a.data();
  const float* pk = keep != nullptr ? keep->data() : nullptr;
  float* po = out.data();
  for (int i = 0; i < m; ++i) {
    const float* row = pa + static_cast<std::size_t>(i) * n;
    float* orow = po + static_cast<std::size_t>(i) * n;
    const float* krow = pk != nullptr ? pk + static_cast<std::size_t>(i) * n : nullptr;
    float mx = -std::numeric_limits<float>::infinity();
    int kept = 0;
    for (int j = 0; j < n; ++j) {
      if (krow == nullptr || krow[j] != 0.0f) {
        mx = std::max(mx, row[j]);
        ++kept;
      }
    }
    if (kept == 0) {
      throw_error(ErrorCode::AllMasked, "softmax row " + std::to_string(i) + " fully masked");
    }
    float denom = 0.0f;
    for (int j = 0; j < n; ++j) {
      if (krow == nullptr || krow[j] != 0.0f) {
        orow[j] = std::exp(row[j] - mx);
        denom += orow[j];
      } else {
        orow[j] = 0.0f;
      }
    }
    for (int j = 0; j < n; ++j) orow[j] /= denom;
  }

  record({a}, out, false, [a, out, m, n]() {
    const float* g = out.grad();
    const float* y = out.data();
    std::vector<float> da(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
      const std::size_t base = static_cast<std::size_t>(i) * n;
      float dot = 0.0f;
      for (int j = 0; j < n; ++j) dot += g[base + j] * y[base + j];
      for (int j = 0; j < n; ++j) da[base + j] = y[base + j] * (g[base + j] - dot);
    }
    accumulate(a, da.data(), false);
  });
  return out;
}

Tensor Tape::layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, float eps) {
  const int m = x.rows(), d = x.cols();
  if (gain.rows() != 1 || gain.cols() != d || bias.rows() != 1 || bias.cols() != d) {
    throw_error(ErrorCode::ShapeMismatch,
                "layer_norm: gain " + gain.shape_string() + ", bias " + bias.shape_string() +
                    " for input " + x.shape_string());
  }
  Tensor out = alloc(m, d, Precision::Single32);
  auto xhat = std::make_shared<std::vector<float>>(static_cast<std::size_t>(m) * d);
  auto inv = std::make_shared<std::vector<float>>(static_cast<std::size_t>(m));
  const float* px = x.data();
  const float* pg = gain.data();
  const float* pb = bias.data();
  float* po = out.data();
  for (int i = 0; i < m; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * d;
    float mu = 0.0f;
    for (int j = 0; j < d; ++j) mu += px[base + j];
    mu /= static_cast<float>(d);
    float var = 0.0f;
    for (int j = 0; j < d; ++j) {
      const float c = px[base + j] - mu;
      var += c * c;
    }
    var /= static_cast<float>(d);
    const float iv = 1.0f / std::sqrt(var + eps);
    (*inv)[static_cast<std::size_t>(i)] = iv;
    for (int j = 0; j < d; ++j) {
      const float xh = (px[base + j] - mu) * iv;
      (*xhat)[base + j] = xh;
      po[base + j] = xh * pg[j] + pb[j];
    }
  }

  record({x, gain, bias}, out, false, [x, gain, bias, out, xhat, inv, m, d]() {
    const float* g = out.grad();
    const float* pg2 = gain.data();
    if (gain.requires_grad()) {
      std::vector<float> dg(static_cast<std::size_t>(d), 0.0f);
      for (int i = 0; i < m; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * d;
        for (int j = 0; j < d; ++j) dg[j] += g[base + j] * (*xhat)[base + j];
      }
      accumulate(gain, dg.data(), false);
    }
    if (bias.requires_grad()) {
      std::vector<float> db(static_cast<std::size_t>(d), 0.0f);
      for (int i = 0; i < m; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * d;
        for (int j = 0; j < d; ++j) db[j] += g[base + j];
      }
      accumulate(bias, db.data(), false);
    }
    if (x.requires_grad()) {
      std::vector<float> dx(static_cast<std::size_t>(m) * d);
      for (int i = 0; i < m; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * d;
        float m1 = 0.0f, m2 = 0.0f;
        for (int j = 0; j < d; ++j) {
          const float dxh = g[base + j] * pg2[j];
          m1 += dxh;
          m2 += dxh * (*xhat)[base + j];
        }
        m1 /= static_cast<float>(d);
        m2 /= static_cast<float>(d);
        const float iv = (*inv)[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) {
          const float dxh = g[base + j] * pg2[j];
          dx[base + j] = iv * (dxh - m1 - (*xhat)[base + j] * m2);
        }
      }
      accumulate(x, dx.data(), false);
    }
  });
  return out;
}

Tensor Tape::cast_to(const Tensor& a, Precision target) {
  Tensor out = alloc(a.rows(), a.cols(), target);
  const float* pa = a.data();
  float* po = out.data();
  const std::int64_t n = a.numel();
  if (target == Precision::Half16) {
    int overflows = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      bool ov = false;
      po[i] = half_round(pa[i], &ov);
      overflows += ov ? 1 : 0;
    }
    overflow_events_ += overflows;
  } else {
    std::memcpy(po, pa, sizeof(float) * static_cast<std::size_t>(n));
  }

  record({a}, out, false, [a, out]() {
    accumulate(a, out.grad(), false);
  });
  return out;
}

Tensor Tape::dropout(const Tensor& a, float rate, bool train, RngStream& rng) {
  if (!train || rate <= 0.0f) return a;  // identity in eval mode, exactly
  const float keep_scale = 1.0f / (1.0f - rate);
  std::vector<float> mask(static_cast<std::size_t>(a.numel()));
  for (float& v : mask) v = rng.uniform() >= rate ? keep_scale : 0.0f;
  return mul(a, Tensor::from_data(a.rows(), a.cols(), std::move(mask)));
}

// --- reverse pass ----------------------------------------------------------

void Tape::run_backward_from(const Tensor& loss, float seed) {
  if (!loss.defined() || !loss.is_scalar()) {
    throw_error(ErrorCode::ShapeMismatch,
                "backward: loss must be scalar, got " +
                    (loss.defined() ? loss.shape_string() : std::string("(undefined)")));
  }
  if (loss.impl_->tape != this || loss.impl_->node < 0) {
    throw_error(ErrorCode::BackwardWithoutGraph,
                "loss was not produced by a recorded node of this tape");
  }
  Tensor l = loss;
  l.ensure_grad();
  l.grad()[0] = seed;
  for (std::int64_t i = loss.impl_->node; i >= 0; --i) {
    Node& nd = nodes_[static_cast<std::size_t>(i)];
    if (!nd.backward) continue;
    if (!nd.output.has_grad()) continue;
    nd.backward();
  }
}

void Tape::backward(const Tensor& loss) { run_backward_from(loss, 1.0f); }

std::vector<Tensor> Tape::grad_tensors() const {
  std::vector<Tensor> result;
  std::unordered_set<const void*> seen;
  for (const Node& nd : nodes_) {
    for (const Tensor& t : nd.inputs) {
      if (t.has_grad() && seen.insert(t.id()).second) result.push_back(t);
    }
    if (nd.output.has_grad() && seen.insert(nd.output.id()).second) result.push_back(nd.output);
  }
  return result;
}

BackwardStats Tape::scaled_backward(const Tensor& loss, const LossScaler& scaler) {
  run_backward_from(loss, static_cast<float>(scaler.scale));
  std::vector<Tensor> ts = grad_tensors();
  const float s = static_cast<float>(scaler.scale);
  bool valid = true;
  for (Tensor& t : ts) {
    float* g = t.grad();
    const std::int64_t n = t.numel();
    for (std::int64_t i = 0; i < n; ++i) {
      g[i] /= s;
      valid = valid && std::isfinite(g[i]);
    }
  }
  if (!valid) {
    for (Tensor& t : ts) t.zero_grad();
  }
  return BackwardStats{valid};
}

}  // namespace adgsyn
