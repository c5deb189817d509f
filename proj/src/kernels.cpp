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

#include "adgsyn/kernels.hpp"

#include <atomic>

#ifdef ADGSYN_HAVE_OPENMP
#include <omp.h>
#endif

namespace adgsyn::kern {

namespace serial {

void matmul(const float* a, const float* b, float* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const float* arow = a + static_cast<long>(i) * k;
    float* crow = c + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) crow[j] = 0.0f;
    for (int p = 0; p < k; ++p) {
      const float av = arow[p];
      const float* brow = b + static_cast<long>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_nt(const float* a, const float* b, float* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const float* arow = a + static_cast<long>(i) * k;
    float* crow = c + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) {
      const float* brow = b + static_cast<long>(j) * k;
      float acc = 0.0f;
      for (int p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] = acc;
    }
  }
}

void matmul_tn(const float* a, const float* b, float* c, int m, int k, int n) {
  // a is k x m, result m x n. Row i of C reduces over A column i, kept in
  // ascending p order so the OpenMP path can reproduce it exactly.
  for (int i = 0; i < m; ++i) {
    float* crow = c + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) crow[j] = 0.0f;
    for (int p = 0; p < k; ++p) {
      const float av = a[static_cast<long>(p) * m + i];
      const float* brow = b + static_cast<long>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace serial

namespace openmp {

#ifdef ADGSYN_HAVE_OPENMP

void matmul(const float* a, const float* b, float* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    const float* arow = a + static_cast<long>(i) * k;
    float* crow = c + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) crow[j] = 0.0f;
    for (int p = 0; p < k; ++p) {
      const float av = arow[p];
      const float* brow = b + static_cast<long>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_nt(const float* a, const float* b, float* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    const float* arow = a + static_cast<long>(i) * k;
    float* crow = c + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) {
      const float* brow = b + static_cast<long>(j) * k;
      float acc = 0.0f;
      for (int p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] = acc;
    }
  }
}

void matmul_tn(const float* a, const float* b, float* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    float* crow = c + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) crow[j] = 0.0f;
    for (int p = 0; p < k; ++p) {
      const float av = a[static_cast<long>(p) * m + i];
      const float* brow = b + static_cast<long>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

#else

void matmul(const float* a, const float* b, float* c, int m, int k, int n) {
  serial::matmul(a, b, c, m, k, n);
}
void matmul_nt(const float* a, const float* b, float* c, int m, int k, int n) {
  serial::matmul_nt(a, b, c, m, k, n);
}
void matmul_tn(const float* a, const float* b, float* c, int m, int k, int n) {
  serial::matmul_tn(a, b, c, m, k, n);
}

#endif

}  // namespace openmp

namespace {
std::atomic<bool> g_parallel{true};

// Tiny products are faster single-threaded.
inline bool worth_threads(int m, int k, int n) {
  return static_cast<long>(m) * k * n >= 16384;
}
}  // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool enabled) { g_parallel.store(enabled, std::memory_order_relaxed); }

int max_threads() {
#ifdef ADGSYN_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void matmul(const float* a, const float* b, float* c, int m, int k, int n) {
  if (parallel_enabled() && worth_threads(m, k, n)) {
    openmp::matmul(a, b, c, m, k, n);
  } else {
    serial::matmul(a, b, c, m, k, n);
  }
}

void matmul_nt(const float* a, const float* b, float* c, int m, int k, int n) {
  if (parallel_enabled() && worth_threads(m, k, n)) {
    openmp::matmul_nt(a, b, c, m, k, n);
  } else {
    serial::matmul_nt(a, b, c, m, k, n);
  }
}

void matmul_tn(const float* a, const float* b, float* c, int m, int k, int n) {
  if (parallel_enabled() && worth_threads(m, k, n)) {
    openmp::matmul_tn(a, b, c, m, k, n);
  } else {
    serial::matmul_tn(a, b, c, m, k, n);
  }
}

}  // namespace adgsyn::kern
