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

namespace adgsyn::kern {

// Dense single-precision matmul kernels. The serial versions are the
// reference; the OpenMP versions split the output across threads while each
// output element keeps the serial reduction order, so for a fixed input both
// paths produce bit-identical results.
//
//   matmul:    C[m x n] = A[m x k] * B[k x n]
//   matmul_nt: C[m x n] = A[m x k] * B[n x k]^T
//   matmul_tn: C[m x n] = A[k x m]^T * B[k x n]

namespace serial {
void matmul(const float* a, const float* b, float* c, int m, int k, int n);
void matmul_nt(const float* a, const float* b, float* c, int m, int k, int n);
void matmul_tn(const float* a, const float* b, float* c, int m, int k, int n);
}  // namespace serial

namespace openmp {
void matmul(const float* a, const float* b, float* c, int m, int k, int n);
void matmul_nt(const float* a, const float* b, float* c, int m, int k, int n);
void matmul_tn(const float* a, const float* b, float* c, int m, int k, int n);
}  // namespace openmp

/// Process-wide switch between the two backends (default: OpenMP when built
/// with it). Thread dispatch never changes numeric results.
bool parallel_enabled();
void set_parallel(bool enabled);
int max_threads();

void matmul(const float* a, const float* b, float* c, int m, int k, int n);
void matmul_nt(const float* a, const float* b, float* c, int m, int k, int n);
void matmul_tn(const float* a, const float* b, float* c, int m, int k, int n);

}  // namespace adgsyn::kern
