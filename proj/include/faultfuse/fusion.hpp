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

#ifndef FAULTFUSE_FUSION_HPP_
#define FAULTFUSE_FUSION_HPP_

// Condenses a Pareto archive of feature subsets into one weighted feature
// list: a vote picks the features, archive frequency weighs them.

#include <optional>
#include <vector>

#include "faultfuse/moo.hpp"

namespace faultfuse::fusion {

using Ballot = std::vector<int>;  // feature ids

struct WeightedFeature {
  int feature = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedFeature&, const WeightedFeature&) = default;
};

// Weight descending, ties by ascending id.
using FusedSet = std::vector<WeightedFeature>;

// ceil(feature_count / 3), at least 1.
int DefaultKeep(std::size_t feature_count);

// The `keep` features with the highest tally across ballots. Ties at the cut
// go to the larger mass (sum of 1/|ballot| over ballots naming the feature),
// then the lower id. Features no ballot names are never returned. Result is
// ascending. Errors: kEmptyBallots, kConfigError (keep < 1).
std::vector<int> Vote(const std::vector<Ballot>& ballots, int keep);

// Sorts into FusedSet order; drops non-positive weights and duplicate ids
// (first occurrence wins).
FusedSet Order(std::vector<WeightedFeature> features);

// weight(f) = frequency of f across ballots, scaled so the selected weights
// average 1. Selected features no ballot names are dropped.
// Errors: kEmptySelection (nothing left), kEmptyBallots.
FusedSet Weigh(const std::vector<int>& selected, const std::vector<Ballot>& ballots);

// Selected feature ids of every archive member.
std::vector<Ballot> Ballots(const std::vector<moo::Individual>& archive);

// Vote, then weigh; keep defaults to DefaultKeep(genome length).
FusedSet Fuse(const std::vector<moo::Individual>& archive, std::optional<int> keep = std::nullopt);

}  // namespace faultfuse::fusion

#endif  // FAULTFUSE_FUSION_HPP_
