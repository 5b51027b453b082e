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
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "faultfuse/neural.hpp"
#include "faultfuse/random.hpp"
#include "test_util.hpp"

namespace faultfuse::neural {
namespace {

using faultfuse::testing::ErrorCodeOf;

void Set(Model& m, const char* name, std::vector<double> values) {
  auto v = m.view(name);
  ASSERT_EQ(v.size(), values.size()) << name;
  std::copy(values.begin(), values.end(), v.begin());
}

std::vector<double> RandomVec(Rng& rng, std::size_t n, double lo = -1, double hi = 1) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.Uniform(lo, hi);
  return v;
}

// Largest relative error between the analytic gradient and central
// differences (step 1e-5) over every parameter.
double WorstGradientError(Model& model, const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
                          double l2) {
  std::vector<double> grad;
  model.Loss(xs, ys, l2, &grad);
  auto& theta = model.parameters();
  double worst = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double saved = theta[k];
    theta[k] = saved + 1e-5;
    const double up = model.Loss(xs, ys, l2, nullptr);
    theta[k] = saved - 1e-5;
    const double down = model.Loss(xs, ys, l2, nullptr);
    theta[k] = saved;
    const double numeric = (up - down) / 2e-5;
    const double denom = std::max({std::fabs(numeric), std::fabs(grad[k]), 1e-7});
    worst = std::max(worst, std::fabs(numeric - grad[k]) / denom);
  }
  return worst;
}

TEST(Bce, Examples) {
  EXPECT_NEAR(Bce(1.0 - kProbEpsilon, 1), 0.0, 1e-6);
  EXPECT_NEAR(Bce(0.5, 1), std::log(2.0), 1e-15);
  const std::vector<double> p{0.9, 0.2};
  const std::vector<int> y{1, 0};
  EXPECT_NEAR(BceLoss(p, y, 0.0, {}), 0.164252033486018, 1e-15);
  const std::vector<double> params{1.0, -2.0};
  EXPECT_NEAR(BceLoss(p, y, 0.5, params), 0.164252033486018 + 2.5, 1e-15);
  const std::vector<int> bad{1, 2};
  EXPECT_EQ(ErrorCodeOf([&] { BceLoss(p, bad, 0.0, {}); }), ErrorCode::kLabelOutOfRange);
  EXPECT_TRUE(std::isfinite(Bce(0.0, 1)));
}

TEST(MlpTest, ZeroParametersGiveHalf) {
  Mlp m;
  const std::vector<double> x{0.3, -2.0, 5.0};
  for (double h : m.Hidden(x)) EXPECT_EQ(h, 0.5);
  EXPECT_EQ(m.Predict(x), 0.5);
  EXPECT_EQ(m.parameters().size(), 3u * 128 + 128 + 128 + 1);
}

TEST(MlpTest, HandEvaluatedTwoUnitInstance) {
  Mlp m(3, 2);
  Set(m, "W", {1, 0, -1, 0.5, 0.5, 0.5});
  Set(m, "b", {0.2, -1});
  Set(m, "w_out", {2, -1});
  Set(m, "b_out", {0.5});
  EXPECT_NEAR(m.Predict(std::vector<double>{1, 0, 1}), 0.7501978926194248, 1e-15);
}

TEST(MlpTest, OutputInUnitIntervalAndInputChecks) {
  Mlp m;
  m.InitializeWeights(3);
  Rng rng(1);
  for (int t = 0; t < 10000; ++t) {
    const double p = m.Predict(RandomVec(rng, 3, -10, 10));
    ASSERT_GT(p, 0.0);
    ASSERT_LT(p, 1.0);
  }
  EXPECT_EQ(ErrorCodeOf([&] { m.Predict(std::vector<double>{NAN, 0, 0}); }), ErrorCode::kNonFiniteInput);
  EXPECT_EQ(ErrorCodeOf([&] { m.Predict(std::vector<double>{0, 0}); }), ErrorCode::kShapeMismatch);
}

TEST(MlpTest, GradientMatchesFiniteDifferences) {
  Rng rng(2);
  for (int inst = 0; inst < 10; ++inst) {
    Mlp m(3, 2);
    for (auto& t : m.parameters()) t = rng.Uniform(-1, 1);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 4; ++i) {
      xs.push_back(RandomVec(rng, 3));
      ys.push_back(i % 2);
    }
    EXPECT_LT(WorstGradientError(m, xs, ys, 0.0), 1e-4);
    EXPECT_LT(WorstGradientError(m, xs, ys, 1e-2), 1e-4);
  }
}

TEST(GruTest, ZeroParametersGiveHalf) {
  Gru g(4);
  EXPECT_EQ(g.Predict(std::vector<double>(12, 0.7)), 0.5);
  EXPECT_EQ(g.tensor("l0.W_z").cols, 64u + 4u);
  EXPECT_EQ(g.tensor("l1.W_z").cols, 128u);
}

TEST(GruTest, HandEvaluatedTwoUnitCell) {
  Gru g(1, 2, 1, 1);
  Set(g, "l0.W_z", {0.3, -0.1, 0.2, 0.0, 0.4, -0.5});
  Set(g, "l0.b_z", {0.1, -0.1});
  Set(g, "l0.W_r", {0.6, -0.3});
  Set(g, "l0.U_r", {0.2, 0.1, -0.4, 0.3});
  Set(g, "l0.b_r", {0.0, 0.05});
  Set(g, "l0.W_h", {-0.7, 0.9});
  Set(g, "l0.U_h", {0.5, -0.2, 0.1, 0.3});
  Set(g, "l0.b_h", {0.02, -0.03});
  const GruStep s = g.Cell(0, std::vector<double>{0.5}, std::vector<double>{0.1, -0.2});
  EXPECT_NEAR(s.h[0], -0.11133899573015546, 1e-15);
  EXPECT_NEAR(s.h[1], 0.028146175827200887, 1e-15);
  EXPECT_EQ(ErrorCodeOf([&] { g.Cell(0, std::vector<double>{0.5, 1}, std::vector<double>{0, 0}); }),
            ErrorCode::kShapeMismatch);
}

TEST(GruTest, GateIdentities) {
  Rng rng(3);
  Gru g(3, 8, 1, 3);
  g.InitializeWeights(5);
  const auto x = RandomVec(rng, 3), h_prev = RandomVec(rng, 8, -0.9, 0.9);
  auto bz = g.view("l0.b_z");
  std::fill(bz.begin(), bz.end(), -40.0);
  GruStep closed = g.Cell(0, x, h_prev);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_LT(std::fabs(closed.h[i] - h_prev[i]), 1e-6);
  std::fill(bz.begin(), bz.end(), 40.0);
  GruStep open = g.Cell(0, x, h_prev);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_LT(std::fabs(open.h[i] - open.candidate[i]), 1e-6);
}

TEST(GruTest, GateRangesAndConvexity) {
  Rng rng(4);
  Gru g(5, 16, 2, 3);
  // Pre-activations stay below ~12 here; beyond ~19 tanh rounds to +-1 in
  // double precision and the open interval cannot hold.
  for (int t = 0; t < 200; ++t) {
    for (auto& p : g.parameters()) p = rng.Uniform(-0.5, 0.5);
    for (const auto& layer : g.Trace(RandomVec(rng, 15, -1, 1))) {
      std::vector<double> h_prev(16, 0.0);
      for (const GruStep& s : layer) {
        for (std::size_t i = 0; i < 16; ++i) {
          EXPECT_GT(s.z[i], 0.0);
          EXPECT_LT(s.z[i], 1.0);
          EXPECT_GT(s.r[i], 0.0);
          EXPECT_LT(s.r[i], 1.0);
          EXPECT_GT(s.candidate[i], -1.0);
          EXPECT_LT(s.candidate[i], 1.0);
          EXPECT_GE(s.h[i], std::min(h_prev[i], s.candidate[i]));
          EXPECT_LE(s.h[i], std::max(h_prev[i], s.candidate[i]));
        }
        h_prev = s.h;
      }
    }
  }
}

TEST(GruTest, StepOrderMatters) {
  Rng rng(6);
  Gru g(2, 6, 2, 3);
  for (auto& p : g.parameters()) p = rng.Uniform(-1, 1);
  const std::vector<double> seq{0.1, 0.9, 0.5, 0.2, 0.8, 0.3};
  const std::vector<double> swapped{0.5, 0.2, 0.1, 0.9, 0.8, 0.3};
  EXPECT_NE(g.Predict(seq), g.Predict(swapped));
}

TEST(GruTest, GradientMatchesFiniteDifferences) {
  Rng rng(7);
  for (int inst = 0; inst < 10; ++inst) {
    Gru g(2, 2, 2, 3);
    for (auto& t : g.parameters()) t = rng.Uniform(-1, 1);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 3; ++i) {
      xs.push_back(RandomVec(rng, 6));
      ys.push_back(i % 2);
    }
    EXPECT_LT(WorstGradientError(g, xs, ys, 1e-4), 1e-4);
  }
}

std::vector<std::vector<double>> Separable(std::vector<int>& ys) {
  std::vector<std::vector<double>> xs;
  Rng rng(8);
  ys.clear();
  for (int i = 0; i < 40; ++i) {
    const int y = i % 2;
    xs.push_back({y ? rng.Uniform(0.6, 1.0) : rng.Uniform(0.0, 0.4), rng.Uniform()});
    ys.push_back(y);
  }
  return xs;
}

TEST(TrainTest, SeparableSetReachesFullAccuracy) {
  std::vector<int> ys;
  const auto xs = Separable(ys);
  Mlp m(2, 128);
  m.InitializeWeights(1);
  TrainConfig c;
  c.learning_rate = 0.01;
  c.seed = 1;
  const auto curve = Train(m, xs, ys, c);
  ASSERT_EQ(curve.size(), 10u);
  EXPECT_EQ(curve.front().epoch, 10);
  EXPECT_LT(curve.back().loss, curve.front().loss);
  int correct = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) correct += (m.Predict(xs[i]) >= 0.5) == (ys[i] == 1);
  EXPECT_EQ(correct, 40);
}

TEST(TrainTest, DefaultScheduleLowersTheLoss) {
  std::vector<int> ys;
  const auto xs = Separable(ys);
  for (int kind = 0; kind < 2; ++kind) {
    std::unique_ptr<Model> m;
    if (kind == 0) m = std::make_unique<Mlp>(2, 128);
    else m = std::make_unique<Gru>(2, 64, 2, 1);
    m->InitializeWeights(2);
    TrainConfig c;
    c.seed = 2;
    c.l2 = kind == 1 ? 1e-4 : 0.0;
    const auto curve = Train(*m, xs, ys, c);
    EXPECT_LT(curve.back().loss, curve.front().loss) << m->type();
  }
}

TEST(TrainTest, ZeroLearningRateLeavesParameters) {
  std::vector<int> ys;
  const auto xs = Separable(ys);
  for (bool sgd : {false, true}) {
    Mlp m(2, 8);
    m.InitializeWeights(3);
    const auto before = m.parameters();
    TrainConfig c;
    c.learning_rate = 0.0;
    c.plain_sgd = sgd;
    Train(m, xs, ys, c);
    EXPECT_EQ(m.parameters(), before);
  }
}

TEST(TrainTest, DeterministicUnderSeed) {
  std::vector<int> ys;
  const auto xs = Separable(ys);
  Gru a(2, 4, 2, 1), b(2, 4, 2, 1);
  a.InitializeWeights(9);
  b.InitializeWeights(9);
  TrainConfig c;
  c.seed = 11;
  c.epochs = 20;
  EXPECT_EQ(Train(a, xs, ys, c).back().loss, Train(b, xs, ys, c).back().loss);
  EXPECT_EQ(a.parameters(), b.parameters());
}

TEST(TrainTest, DegenerateLabels) {
  Mlp m(2, 4);
  const std::vector<std::vector<double>> xs{{0, 1}, {1, 0}};
  const std::vector<int> ys{1, 1};
  EXPECT_EQ(ErrorCodeOf([&] { Train(m, xs, ys, {}); }), ErrorCode::kDegenerateLabels);
}

TEST(Score, UntrainedAndMissingModels) {
  Mlp m;
  m.InitializeWeights(4);
  const std::vector<std::vector<double>> xs{{0.1, 0.2, 0.3}, {0.9, 0.1, 0.3}, {0.1, 0.2, 0.3}};
  const auto s = ScoreStatements(&m, xs);
  for (double v : s) EXPECT_EQ(v, 0.5);
  m.SetOutputBias(0.3);
  const auto t = ScoreStatements(&m, xs);
  EXPECT_EQ(t[0], t[2]);
  EXPECT_EQ(ErrorCodeOf([&] { ScoreStatements(nullptr, xs); }), ErrorCode::kUntrainedModel);
}

TEST(Inputs, FamilyMeansAndPadding) {
  using features::Family;
  const std::vector<double> row{0.2, 0.4, 1.0, 0.5, 0.8};
  const std::vector<FusedColumn> fused{
      {0, Family::kSbfl, 1.5}, {1, Family::kSbfl, 0.5}, {2, Family::kSbfl, 1.0}, {4, Family::kTbfl, 2.0}};
  const auto mlp = MlpInput(row, fused, false);
  EXPECT_DOUBLE_EQ(mlp[0], (1.5 * 0.2 + 0.5 * 0.4 + 1.0) / 3.0);
  EXPECT_EQ(mlp[1], 0.0);
  EXPECT_DOUBLE_EQ(mlp[2], 0.8);
  EXPECT_EQ(MlpInput(row, fused, true).size(), 4u);
  EXPECT_EQ(SequenceStepSize(fused), 3u);
  const auto seq = SequenceInput(row, fused);
  ASSERT_EQ(seq.size(), 9u);
  EXPECT_DOUBLE_EQ(seq[0], 0.3);
  EXPECT_DOUBLE_EQ(seq[1], 0.2);
  EXPECT_DOUBLE_EQ(seq[2], 1.0);
  EXPECT_EQ(seq[3], 0.0);
  EXPECT_EQ(seq[5], 0.0);
  EXPECT_DOUBLE_EQ(seq[6], 1.6);
  EXPECT_DOUBLE_EQ(seq[7], 1.6);
  EXPECT_DOUBLE_EQ(seq[8], 1.6);
}

}  // namespace
}  // namespace faultfuse::neural
