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
#include <functional>
#include <span>
#include <vector>

#include "adgsyn/rng.hpp"
#include "adgsyn/tensor.hpp"

namespace adgsyn {

enum class OpKind : int {
  MatMul = 0,
  MatMulNT,
  Add,
  Sub,
  Mul,
  Scale,
  Relu,
  LeakyRelu,
  Tanh,
  Sigmoid,
  Exp,
  Log,
  Sum,
  Mean,
  SumCols,
  MeanRows,
  Concat,
  SliceCols,
  SoftmaxRows,
  LayerNorm,
  Reshape,
  Cast,
  kCount,
};

/// Which op kinds run in emulated Half16 versus Single32. Data-movement ops
/// (Concat, SliceCols, Reshape) belong to neither set and inherit the input
/// precision. Softmax normalization and all reductions are pinned to
/// Single32; gradient accumulation buffers and master weights are Single32
/// structurally.
struct PrecisionPolicy {
  std::uint64_t half_ops = 0;
  std::uint64_t full_ops = 0;

  static PrecisionPolicy full32();
  static PrecisionPolicy mixed();

  bool is_half(OpKind k) const { return (half_ops >> static_cast<int>(k)) & 1u; }
  bool is_full(OpKind k) const { return (full_ops >> static_cast<int>(k)) & 1u; }

  /// Throws ConfigInvalid if the sets overlap or a mandatory-Single32 kind
  /// landed in half_ops.
  void validate() const;
};

struct BackwardStats {
  bool grads_valid = true;
};

struct LossScaler;  // amp.hpp

/// Recorded computation graph. Single-threaded by contract; independent
/// tapes may run on independent threads. Values are computed eagerly, the
/// backward sweep replays recorded closures in reverse order.
///
/// Half16-mode ops view their inputs through binary16 rounding (master
/// weights stay untouched), compute in Single32, and round results back to
/// binary16 — gradient contributions of such ops are rounded the same way
/// before being accumulated into the Single32 gradient buffers.
class Tape {
 public:
  explicit Tape(PrecisionPolicy policy = PrecisionPolicy::full32());

  const PrecisionPolicy& policy() const { return policy_; }
  void set_policy(PrecisionPolicy p);

  bool recording() const { return recording_; }
  void set_recording(bool on) { recording_ = on; }

  MemoryLedger& ledger() { return ledger_; }
  const MemoryLedger& ledger() const { return ledger_; }

  /// Count of values saturated to infinity by Half16 rounding so far.
  int overflow_events() const { return overflow_events_; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Frees all recorded nodes and returns their bytes to the ledger.
  /// Ledger peak statistics survive until ledger().reset().
  void reset();

  // --- primitives -------------------------------------------------------

  Tensor matmul(const Tensor& a, const Tensor& b);
  /// a (m x k) times b (n x k) transposed -> m x n.
  Tensor matmul_nt(const Tensor& a, const Tensor& b);

  // add/sub/mul broadcast over 2-D shapes (dims equal or 1).
  Tensor add(const Tensor& a, const Tensor& b);
  Tensor sub(const Tensor& a, const Tensor& b);
  Tensor mul(const Tensor& a, const Tensor& b);
  Tensor scale(const Tensor& a, float c);

  Tensor relu(const Tensor& a);
  Tensor leaky_relu(const Tensor& a, float negative_slope);
  Tensor tanh(const Tensor& a);
  Tensor sigmoid(const Tensor& a);
  Tensor exp(const Tensor& a);
  Tensor log(const Tensor& a);

  Tensor sum(const Tensor& a);
  Tensor mean(const Tensor& a);
  /// m x n -> m x 1, summing each row.
  Tensor sum_cols(const Tensor& a);
  /// m x n -> 1 x n, dimension-wise average over rows.
  Tensor mean_rows(const Tensor& a);

  Tensor concat_cols(std::span<const Tensor> parts);
  Tensor concat_cols(std::initializer_list<Tensor> parts);
  Tensor slice_cols(const Tensor& a, int col_begin, int col_end);
  Tensor reshape(const Tensor& a, int rows, int cols);

  /// Row-wise softmax in Single32. `keep`, when given, is a same-shape 0/1
  /// tensor; masked (0) entries get probability exactly 0. A fully masked
  /// row raises AllMasked.
  Tensor softmax_rows(const Tensor& a, const Tensor* keep = nullptr);

  Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, float eps);

  Tensor cast_to(const Tensor& a, Precision target);

  /// Train mode: zero each element with probability `rate`, scale survivors
  /// by 1/(1-rate). Eval mode returns the input tensor itself.
  Tensor dropout(const Tensor& a, float rate, bool train, RngStream& rng);

  // --- reverse pass -----------------------------------------------------

  /// Populates Single32 gradients of every requires_grad tensor reachable
  /// from `loss`. Throws BackwardWithoutGraph when loss was not produced by
  /// a recorded node of this tape.
  void backward(const Tensor& loss);

  /// Backward on loss * scaler.scale, then gradients divided by the scale in
  /// Single32. If any gradient ends non-finite, all gradients are zeroed and
  /// grads_valid is false. The scaler itself is not modified here; apply
  /// scaler_update afterwards.
  BackwardStats scaled_backward(const Tensor& loss, const LossScaler& scaler);

  /// Forces Single32 behavior for ops recorded while alive (loss math and
  /// classifier-head regions).
  class ScopedFullPrecision {
   public:
    explicit ScopedFullPrecision(Tape& tape) : tape_(tape) { ++tape_.force_full_; }
    ~ScopedFullPrecision() { --tape_.force_full_; }
    ScopedFullPrecision(const ScopedFullPrecision&) = delete;
    ScopedFullPrecision& operator=(const ScopedFullPrecision&) = delete;

   private:
    Tape& tape_;
  };

 private:
  struct Node {
    std::vector<Tensor> inputs;
    Tensor output;
    std::function<void()> backward;
    bool half_mode = false;
  };

  bool run_half(OpKind kind) const {
    return force_full_ == 0 && policy_.is_half(kind);
  }

  Tensor alloc(int rows, int cols, Precision p);
  void round_output(Tensor& t);
  const float* half_view(const Tensor& t, std::vector<float>& scratch);
  void record(std::vector<Tensor> inputs, Tensor& out, bool half_mode,
              std::function<void()> fn);
  void run_backward_from(const Tensor& loss, float seed);
  std::vector<Tensor> grad_tensors() const;

  Tensor unary(OpKind kind, const Tensor& a, float (*f)(float, float),
               float (*df)(float, float, float), float param);
  Tensor binary(OpKind kind, const Tensor& a, const Tensor& b);

  std::vector<Node> nodes_;
  std::vector<std::pair<Precision, std::int64_t>> alloc_log_;
  PrecisionPolicy policy_;
  MemoryLedger ledger_;
  bool recording_ = true;
  int force_full_ = 0;
  int overflow_events_ = 0;
};

}  // namespace adgsyn
