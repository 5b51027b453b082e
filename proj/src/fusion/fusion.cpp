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

#include "faultfuse/fusion.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "faultfuse/error.hpp"

namespace faultfuse::fusion {
namespace {

constexpr const char* kModule = "fusion";

}  // namespace

int DefaultKeep(std::size_t feature_count) {
  return std::max(1, static_cast<int>((feature_count + 2) / 3));
}

std::vector<int> Vote(const std::vector<Ballot>& ballots, int keep) {
  if (ballots.empty()) throw Error(ErrorCode::kEmptyBallots, kModule, "no ballots to count");
  if (keep < 1) throw Error(ErrorCode::kConfigError, kModule, "keep must be at least 1");
  struct Tally {
    int count = 0;
    double mass = 0.0;
  };
  std::map<int, Tally> tally;
  for (const Ballot& b : ballots) {
    const std::set<int> unique(b.begin(), b.end());
    for (int f : unique) {
      tally[f].count += 1;
      tally[f].mass += 1.0 / static_cast<double>(unique.size());
    }
  }
  std::vector<std::pair<int, Tally>> order(tally.begin(), tally.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    if (a.second.mass != b.second.mass) return a.second.mass > b.second.mass;
    return a.first < b.first;
  });
  std::vector<int> out;
  for (std::size_t i = 0; i < order.size() && out.size() < static_cast<std::size_t>(keep); ++i) {
    out.push_back(order[i].first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

FusedSet Order(std::vector<WeightedFeature> features) {
  FusedSet out;
  std::set<int> seen;
  for (const auto& f : features) {
    if (f.weight > 0.0 && seen.insert(f.feature).second) out.push_back(f);
  }
  std::stable_sort(out.begin(), out.end(), [](const WeightedFeature& a, const WeightedFeature& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.feature < b.feature;
  });
  return out;
}

FusedSet Weigh(const std::vector<int>& selected, const std::vector<Ballot>& ballots) {
  if (ballots.empty()) throw Error(ErrorCode::kEmptyBallots, kModule, "no ballots to weigh against");
  std::vector<WeightedFeature> raw;
  double total = 0.0;
  for (int f : std::set<int>(selected.begin(), selected.end())) {
    double freq = 0.0;
    for (const Ballot& b : ballots) freq += std::find(b.begin(), b.end(), f) != b.end();
    if (freq == 0.0) continue;
    raw.push_back({f, freq});
    total += freq;
  }
  if (raw.empty()) throw Error(ErrorCode::kEmptySelection, kModule, "no selected feature appears in the archive");
  const double scale = static_cast<double>(raw.size()) / total;
  for (auto& f : raw) f.weight *= scale;
  return Order(std::move(raw));
}

std::vector<Ballot> Ballots(const std::vector<moo::Individual>& archive) {
  std::vector<Ballot> out;
  for (const auto& ind : archive) {
    Ballot b;
    for (std::size_t i = 0; i < ind.bits.size(); ++i) {
      if (ind.bits[i]) b.push_back(static_cast<int>(i));
    }
    out.push_back(std::move(b));
  }
  return out;
}

FusedSet Fuse(const std::vector<moo::Individual>& archive, std::optional<int> keep) {
  if (archive.empty()) throw Error(ErrorCode::kEmptyBallots, kModule, "empty archive");
  const std::vector<Ballot> ballots = Ballots(archive);
  const int k = keep.value_or(DefaultKeep(archive.front().bits.size()));
  return Weigh(Vote(ballots, k), ballots);
}

}  // namespace faultfuse::fusion
