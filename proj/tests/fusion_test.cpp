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
#include <set>

#include <gtest/gtest.h>

#include "faultfuse/fusion.hpp"
#include "faultfuse/random.hpp"
#include "test_util.hpp"

namespace faultfuse::fusion {
namespace {

using faultfuse::testing::ErrorCodeOf;

std::vector<int> Ids(const FusedSet& s) {
  std::vector<int> out;
  for (const auto& f : s) out.push_back(f.feature);
  return out;
}

moo::Individual Member(const char* bits) { return {moo::ParseBits(bits), {0, 0, 0}, 0.0}; }

TEST(Vote, WorkedExample) {
  const std::vector<Ballot> ballots{{1, 4, 6}, {2, 4}, {2, 4, 6}};
  EXPECT_EQ(Vote(ballots, 3), (std::vector<int>{2, 4, 6}));
  EXPECT_EQ(Vote({{1}}, 1), (std::vector<int>{1}));
  EXPECT_EQ(Vote(ballots, 10), (std::vector<int>{1, 2, 4, 6}));
}

TEST(Vote, TieBreaksByMassThenId) {
  // 3 and 7 both appear twice; 7 sits in smaller ballots
  EXPECT_EQ(Vote({{3, 1, 2}, {3, 5, 6}, {7}, {7, 8}}, 1), (std::vector<int>{7}));
  EXPECT_EQ(Vote({{3}, {9}}, 1), (std::vector<int>{3}));
}

TEST(Vote, Errors) {
  EXPECT_EQ(ErrorCodeOf([] { Vote({}, 1); }), ErrorCode::kEmptyBallots);
  EXPECT_EQ(ErrorCodeOf([] { Vote({{1}}, 0); }), ErrorCode::kConfigError);
}

TEST(Vote, UniversalFeatureAlwaysKept) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<Ballot> ballots(1 + rng.Index(6));
    for (auto& b : ballots) {
      for (int f = 0; f < 9; ++f) {
        if (rng.Bernoulli(0.5)) b.push_back(f);
      }
      b.push_back(9);
    }
    // 9 is the only feature every ballot names
    ballots.push_back({9});
    const int keep = 1 + static_cast<int>(rng.Index(5));
    const auto kept = Vote(ballots, keep);
    EXPECT_TRUE(std::count(kept.begin(), kept.end(), 9));
  }
}

// Adding a ballot with f never lets a feature outside that ballot overtake f.
TEST(Vote, Monotonicity) {
  Rng rng(2);
  for (int t = 0; t < 300; ++t) {
    std::vector<Ballot> ballots(1 + rng.Index(5));
    for (auto& b : ballots) {
      for (int f = 0; f < 6; ++f) {
        if (rng.Bernoulli(0.4)) b.push_back(f);
      }
    }
    Ballot extra;
    for (int f = 0; f < 6; ++f) {
      if (rng.Bernoulli(0.4)) extra.push_back(f);
    }
    if (extra.empty()) continue;
    const int f = extra[rng.Index(extra.size())];
    for (int keep = 1; keep <= 6; ++keep) {
      const auto before = Vote(ballots, keep);
      auto more = ballots;
      more.push_back(extra);
      const auto after = Vote(more, keep);
      if (std::count(before.begin(), before.end(), f)) {
        EXPECT_TRUE(std::count(after.begin(), after.end(), f));
      }
    }
  }
}

TEST(Weigh, PaperWeightsOrder) {
  const FusedSet s = Order({{2, 0.5}, {4, 1.0}, {6, 1.5}});
  EXPECT_EQ(Ids(s), (std::vector<int>{6, 4, 2}));
  EXPECT_EQ(s[0].weight, 1.5);
}

TEST(Weigh, FrequencyMeanNormalized) {
  const std::vector<Ballot> archive{{3}, {3}, {3, 5}, {1}};
  const FusedSet s = Weigh({3, 5}, archive);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], (WeightedFeature{3, 1.5}));
  EXPECT_EQ(s[1], (WeightedFeature{5, 0.5}));
  const FusedSet all = Weigh({0, 1}, {{0, 1}, {0, 1}});
  for (const auto& f : all) EXPECT_EQ(f.weight, 1.0);
  EXPECT_EQ(ErrorCodeOf([] { Weigh({7}, {{1}}); }), ErrorCode::kEmptySelection);
}

TEST(Weigh, OrderInvariantUnderScaling) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<WeightedFeature> raw;
    for (int f = 0; f < 8; ++f) raw.push_back({f, static_cast<double>(1 + rng.Index(4))});
    auto scaled = raw;
    for (auto& f : scaled) f.weight *= 3.5;
    EXPECT_EQ(Ids(Order(raw)), Ids(Order(scaled)));
  }
}

TEST(Fuse, SingleMember) {
  const FusedSet s = Fuse({Member("10101")}, 3);
  EXPECT_EQ(Ids(s), (std::vector<int>{0, 2, 4}));
  for (const auto& f : s) EXPECT_EQ(f.weight, 1.0);
  // default keep is ceil(5 / 3) = 2
  EXPECT_EQ(Ids(Fuse({Member("10101")})), (std::vector<int>{0, 2}));
}

TEST(Fuse, WorkedCompositeExample) {
  // f1..f6 as columns 1..6 of a 7-wide genome
  const std::vector<moo::Individual> archive{Member("0100101"), Member("0010100"), Member("0010101")};
  const FusedSet s = Fuse(archive, 3);
  EXPECT_EQ(Ids(s), (std::vector<int>{4, 2, 6}));
  // the composite example's weights (frequencies 3, 2, 2 mean-normalized)
  EXPECT_DOUBLE_EQ(s[0].weight, 9.0 / 7.0);
}

TEST(Fuse, PermutationInvariantAndNoInvention) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<moo::Individual> archive(1 + rng.Index(8));
    std::set<int> universe;
    for (auto& m : archive) {
      m.bits.resize(10);
      for (std::size_t i = 0; i < 10; ++i) {
        m.bits[i] = rng.Bernoulli(0.3);
        if (m.bits[i]) universe.insert(static_cast<int>(i));
      }
      if (universe.empty()) {
        m.bits[0] = 1;
        universe.insert(0);
      }
    }
    bool any = false;
    for (const auto& m : archive) any = any || std::count(m.bits.begin(), m.bits.end(), 1) > 0;
    if (!any) continue;
    const FusedSet s = Fuse(archive);
    for (const auto& f : s) {
      EXPECT_TRUE(universe.count(f.feature));
      EXPECT_GT(f.weight, 0.0);
    }
    auto shuffled = archive;
    rng.Shuffle(shuffled);
    EXPECT_EQ(Fuse(shuffled), s);
  }
}

TEST(Fuse, DefaultKeep) {
  EXPECT_EQ(DefaultKeep(6), 2);
  EXPECT_EQ(DefaultKeep(17), 6);
  EXPECT_EQ(DefaultKeep(1), 1);
  EXPECT_EQ(ErrorCodeOf([] { Fuse({}); }), ErrorCode::kEmptyBallots);
}

}  // namespace
}  // namespace faultfuse::fusion
