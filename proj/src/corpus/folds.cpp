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

#include <algorithm>
#include <string>

#include "faultfuse/corpus.hpp"
#include "faultfuse/error.hpp"
#include "faultfuse/random.hpp"

namespace faultfuse::corpus {

std::vector<Fold> SplitFolds(std::span<const int> labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kConfigError, "corpus", "fold count must be at least 2");
  const std::size_t n = labels.size();
  const auto folds = static_cast<std::size_t>(k);
  if (n < folds) {
    throw Error(ErrorCode::kTooFewInstances, "corpus",
                std::to_string(n) + " instances cannot fill " + std::to_string(k) + " folds");
  }
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < n; ++i) (labels[i] != 0 ? positives : negatives).push_back(i);
  Rng rng = Rng::Derive(seed, {0xf01d, n, folds});
  rng.Shuffle(positives);
  rng.Shuffle(negatives);

  std::vector<Fold> out(folds);
  std::size_t slot = 0;
  for (const auto* group : {&positives, &negatives}) {
    for (std::size_t idx : *group) {
      out[slot].test.push_back(idx);
      slot = (slot + 1) % folds;
    }
  }
  for (Fold& f : out) {
    std::sort(f.test.begin(), f.test.end());
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (j < f.test.size() && f.test[j] == i) {
        ++j;
      } else {
        f.train.push_back(i);
      }
    }
  }
  return out;
}

}  // namespace faultfuse::corpus
