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

#include "kernels_internal.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace faultfuse::kernels {
namespace {

double DotNeon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void AxpyNeon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void GemvNeon(const double* a, std::size_t rows, std::size_t cols,
              const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] += DotNeon(a + r * cols, x, cols);
}

void GemvTNeon(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) AxpyNeon(x[r], a + r * cols, y, cols);
}

void GerNeon(double alpha, const double* x, std::size_t rows, const double* y,
             std::size_t cols, double* a) {
  for (std::size_t r = 0; r < rows; ++r) AxpyNeon(alpha * x[r], y, a + r * cols, cols);
}

constexpr KernelTable kNeonTable{"neon", DotNeon, AxpyNeon, GemvNeon, GemvTNeon, GerNeon};

}  // namespace

namespace internal {
const KernelTable* NeonTableIfCompiled() { return &kNeonTable; }
}  // namespace internal

}  // namespace faultfuse::kernels

#else

namespace faultfuse::kernels::internal {
const KernelTable* NeonTableIfCompiled() { return nullptr; }
}  // namespace faultfuse::kernels::internal

#endif
