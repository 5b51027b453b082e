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

#ifndef FAULTFUSE_SRC_KERNELS_INTERNAL_HPP_
#define FAULTFUSE_SRC_KERNELS_INTERNAL_HPP_

#include "faultfuse/kernels.hpp"

namespace faultfuse::kernels::internal {

// Defined only in the translation unit compiled with the matching ISA flags.
const KernelTable* Avx2TableIfCompiled();
const KernelTable* NeonTableIfCompiled();

}  // namespace faultfuse::kernels::internal

#endif  // FAULTFUSE_SRC_KERNELS_INTERNAL_HPP_
