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

#ifndef FAULTFUSE_KERNELS_HPP_
#define FAULTFUSE_KERNELS_HPP_

// Dense double-precision kernels used by the neural models and the wrapper
// surrogate. A scalar reference implementation always exists; AVX2+FMA (x86)
// and NEON (aarch64) variants are picked at runtime when the CPU has them.
//
// All matrices are row-major and dense. The "accumulate" kernels add into
// their output, so callers seed the output with a bias or zero.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace faultfuse::kernels {

struct KernelTable {
  const char* name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y += A x,  A is rows x cols, x has cols entries, y has rows entries
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y);
  // y += A^T x,  x has rows entries, y has cols entries
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
  // A += alpha * x y^T,  x has rows entries, y has cols entries
  void (*ger)(double alpha, const double* x, std::size_t rows, const double* y,
              std::size_t cols, double* a);
};

const KernelTable& Scalar();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* Avx2();
const KernelTable* Neon();

// Every variant usable on this machine, scalar first.
std::vector<const KernelTable*> Available();

// The table used by the wrappers below. Chosen once: the widest available
// variant, unless FAULTFUSE_KERNELS=scalar|avx2|neon names another.
const KernelTable& Active();

// Overrides the active table (tests, benchmarking). Returns false when the
// named variant is unavailable.
bool SetActive(std::string_view name);

inline double Dot(std::span<const double> a, std::span<const double> b) {
  return Active().dot(a.data(), b.data(), a.size());
}

inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  Active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void Gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> y) {
  Active().gemv(a.data(), rows, cols, x.data(), y.data());
}

inline void GemvT(std::span<const double> a, std::size_t rows, std::size_t cols,
                  std::span<const double> x, std::span<double> y) {
  Active().gemv_t(a.data(), rows, cols, x.data(), y.data());
}

inline void Ger(double alpha, std::span<const double> x,
                std::span<const double> y, std::span<double> a) {
  Active().ger(alpha, x.data(), x.size(), y.data(), y.size(), a.data());
}

}  // namespace faultfuse::kernels

#endif  // FAULTFUSE_KERNELS_HPP_
