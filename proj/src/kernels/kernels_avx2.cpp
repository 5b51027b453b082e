/*
 * Copyright 2026 The FaultFuse Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Built with -mavx2 -mfma. Nothing here may run before dispatch.cpp has
// confirmed CPU support.

#include "kernels_internal.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace faultfuse::kernels {
namespace {

inline double HorizontalSum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double DotAvx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void AxpyAvx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void GemvAvx2(const double* a, std::size_t rows, std::size_t cols,
              const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] += DotAvx2(a + r * cols, x, cols);
}

void GemvTAvx2(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) AxpyAvx2(x[r], a + r * cols, y, cols);
}

void GerAvx2(double alpha, const double* x, std::size_t rows, const double* y,
             std::size_t cols, double* a) {
  for (std::size_t r = 0; r < rows; ++r) AxpyAvx2(alpha * x[r], y, a + r * cols, cols);
}

constexpr KernelTable kAvx2Table{"avx2", DotAvx2, AxpyAvx2, GemvAvx2, GemvTAvx2, GerAvx2};

}  // namespace

namespace internal {
const KernelTable* Avx2TableIfCompiled() { return &kAvx2Table; }
}  // namespace internal

}  // namespace faultfuse::kernels

#else

namespace faultfuse::kernels::internal {
const KernelTable* Avx2TableIfCompiled() { return nullptr; }
}  // namespace faultfuse::kernels::internal

#endif
