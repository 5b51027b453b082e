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
#include <limits>
#include <numeric>

#include "faultfuse/error.hpp"
#include "faultfuse/moo.hpp"

namespace faultfuse::moo {
namespace {

constexpr const char* kModule = "moo";
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string BitString(const Bits& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

Bits ParseBits(std::string_view s) {
  Bits bits(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw Error(ErrorCode::kConfigError, kModule, "bit string must be 0/1");
    bits[i] = s[i] == '1';
  }
  return bits;
}

std::pair<Bits, Bits> UniformCrossover(const Bits& p1, const Bits& p2, Rng& rng) {
  if (p1.size() != p2.size()) throw Error(ErrorCode::kLengthMismatch, kModule, "parents differ in length");
  Bits c1(p1.size()), c2(p1.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const bool keep = rng.Uniform() < 0.5;
    c1[i] = keep ? p1[i] : p2[i];
    c2[i] = keep ? p2[i] : p1[i];
  }
  return {c1, c2};
}

double MutationProbability(double f_i, double f_max, double f_min, double ceiling) {
  if (f_max == f_min) return ceiling * 0.5;
  return ceiling * (f_max - f_i) / (f_max - f_min);
}

Bits FitnessScaledMutation(const Bits& c, double f_i, double f_max, double f_min, Rng& rng, double ceiling) {
  const double pm = MutationProbability(f_i, f_max, f_min, ceiling);
  Bits out = c;
  for (auto& g : out) {
    if (rng.Uniform() < pm) g = 1 - g;
  }
  return out;
}

void RepairEmpty(Bits& bits, Rng& rng) {
  if (bits.empty() || std::any_of(bits.begin(), bits.end(), [](auto b) { return b != 0; })) return;
  bits[rng.Index(bits.size())] = 1;
}

bool Dominates(const Objectives& a, const Objectives& b) {
  bool strictly = false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] > b[j]) return false;
    strictly = strictly || a[j] < b[j];
  }
  return strictly;
}

std::vector<std::vector<std::size_t>> NonDominatedSort(std::span<const Objectives> points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> counter(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (Dominates(points[p], points[q])) {
        dominated[p].push_back(q);
      } else if (Dominates(points[q], points[p])) {
        ++counter[p];
      }
    }
    if (counter[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<std::size_t> next;
    for (std::size_t p : current) {
      for (std::size_t q : dominated[p]) {
        if (--counter[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> CrowdingDistance(std::span<const Objectives> front) {
  const std::size_t n = front.size();
  std::vector<double> d(n, 0.0);
  if (n <= 2) return std::vector<double>(n, kInf);
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < std::tuple_size_v<Objectives>; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][j] < front[b][j]; });
    const double lo = front[order.front()][j], hi = front[order.back()][j];
    if (hi == lo) continue;
    d[order.front()] = kInf;
    d[order.back()] = kInf;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      d[order[k]] += (front[order[k + 1]][j] - front[order[k - 1]][j]) / (hi - lo);
    }
  }
  return d;
}

std::vector<std::size_t> TruncateByCrowding(std::span<const Objectives> front, std::size_t capacity) {
  std::vector<std::size_t> kept(front.size());
  std::iota(kept.begin(), kept.end(), 0);
  std::vector<Objectives> pts(front.begin(), front.end());
  while (kept.size() > capacity) {
    const std::vector<double> d = CrowdingDistance(pts);
    std::size_t worst = 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
      if (d[i] <= d[worst]) worst = i;
    }
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst));
    pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  return kept;
}

bool MutuallyNonDominated(std::span<const Objectives> points) {
  for (const auto& a : points) {
    for (const auto& b : points) {
      if (Dominates(a, b)) return false;
    }
  }
  return true;
}

bool Archive::Offer(const Individual& candidate) {
  for (const Individual& m : members_) {
    if (m.bits == candidate.bits || Dominates(m.objectives, candidate.objectives)) return false;
  }
  std::erase_if(members_, [&](const Individual& m) { return Dominates(candidate.objectives, m.objectives); });
  const auto pos = std::lower_bound(members_.begin(), members_.end(), candidate,
                                    [](const Individual& a, const Individual& b) { return a.bits < b.bits; });
  const std::size_t index = static_cast<std::size_t>(pos - members_.begin());
  members_.insert(pos, candidate);
  if (members_.size() > capacity_) {
    std::vector<Objectives> pts;
    for (const auto& m : members_) pts.push_back(m.objectives);
    const std::vector<std::size_t> kept = TruncateByCrowding(pts, capacity_);
    std::vector<Individual> next;
    bool survived = false;
    for (std::size_t k : kept) {
      next.push_back(std::move(members_[k]));
      survived = survived || k == index;
    }
    members_ = std::move(next);
    UpdateCrowding();
    return survived;
  }
  UpdateCrowding();
  return true;
}

void Archive::UpdateCrowding() {
  std::vector<Objectives> pts;
  for (const auto& m : members_) pts.push_back(m.objectives);
  const std::vector<double> d = CrowdingDistance(pts);
  for (std::size_t i = 0; i < members_.size(); ++i) members_[i].crowding = d[i];
}

}  // namespace faultfuse::moo
