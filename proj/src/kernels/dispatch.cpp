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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace faultfuse::kernels {
namespace {

bool CpuHasAvx2Fma() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* FindByName(std::string_view name) {
  for (const KernelTable* t : Available()) {
    if (name == t->name) return t;
  }
  return nullptr;
}

const KernelTable* InitialTable() {
  if (const char* env = std::getenv("FAULTFUSE_KERNELS")) {
    if (const KernelTable* t = FindByName(env)) return t;
  }
  return Available().back();
}

std::atomic<const KernelTable*>& ActiveSlot() {
  static std::atomic<const KernelTable*> slot{InitialTable()};
  return slot;
}

}  // namespace

const KernelTable* Avx2() {
  static const KernelTable* table =
      CpuHasAvx2Fma() ? internal::Avx2TableIfCompiled() : nullptr;
  return table;
}

// aarch64 always has Advanced SIMD.
const KernelTable* Neon() { return internal::NeonTableIfCompiled(); }

std::vector<const KernelTable*> Available() {
  std::vector<const KernelTable*> out{&Scalar()};
  if (const KernelTable* t = Avx2()) out.push_back(t);
  if (const KernelTable* t = Neon()) out.push_back(t);
  return out;
}

const KernelTable& Active() { return *ActiveSlot().load(std::memory_order_acquire); }

bool SetActive(std::string_view name) {
  const KernelTable* t = FindByName(name);
  if (t == nullptr) return false;
  ActiveSlot().store(t, std::memory_order_release);
  return true;
}

}  // namespace faultfuse::kernels
