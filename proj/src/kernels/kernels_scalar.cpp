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

namespace faultfuse::kernels {
namespace {

double DotScalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void AxpyScalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void GemvScalar(const double* a, std::size_t rows, std::size_t cols,
                const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] += DotScalar(a + r * cols, x, cols);
}

void GemvTScalar(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) AxpyScalar(x[r], a + r * cols, y, cols);
}

void GerScalar(double alpha, const double* x, std::size_t rows, const double* y,
               std::size_t cols, double* a) {
  for (std::size_t r = 0; r < rows; ++r) {
    AxpyScalar(alpha * x[r], y, a + r * cols, cols);
  }
}

constexpr KernelTable kScalarTable{"scalar", DotScalar,  AxpyScalar,
                                   GemvScalar, GemvTScalar, GerScalar};

}  // namespace

const KernelTable& Scalar() { return kScalarTable; }

}  // namespace faultfuse::kernels
