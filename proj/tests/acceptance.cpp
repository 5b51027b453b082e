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


// Acceptance suite: one PASS/FAIL line per criterion, each held to its
// runtime limit. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "faultfuse/features.hpp"
#include "faultfuse/fusion.hpp"
#include "faultfuse/metrics.hpp"
#include "faultfuse/moo.hpp"
#include "faultfuse/neural.hpp"
#include "faultfuse/pipeline.hpp"
#include "faultfuse/random.hpp"
#include "faultfuse/static_analysis.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "moo_stub.hpp"
#include "test_util.hpp"

namespace {

using namespace faultfuse;
namespace fs = std::filesystem;
namespace ft = faultfuse::testing;
using Json = nlohmann::json;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string Fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

// ---------------------------------------------------------------- 1

Outcome StaticFixture() {
  Outcome o;
  const auto f = static_analysis::AnalyzeSource(ft::kMedianListing);
  o.Require(f.statements.size() == ft::kMedianStaticRows.size(), "statement count");
  if (!o.pass) return o;
  int matched = 0;
  for (std::size_t i = 0; i < f.statements.size(); ++i) {
    const auto& want = ft::kMedianStaticRows[i];
    const auto& got = f.statements[i];
    matched += got.branch_paths == want.branch_paths;
    matched += got.variables == want.variables;
    matched += got.symbols == want.symbols;
  }
  o.Require(matched == 42, std::to_string(matched) + "/42 values match");
  if (o.pass) o.detail = "42/42 values match";
  return o;
}

// ---------------------------------------------------------------- 2

Outcome FusionExamples() {
  Outcome o;
  const std::vector<fusion::Ballot> ballots = {{1, 4, 6}, {2, 4}, {2, 4, 6}};
  const auto kept = fusion::Vote(ballots, 3);
  o.Require(kept == std::vector<int>({2, 4, 6}), "vote result differs from {f2,f4,f6}");
  const auto ordered = fusion::Order({{2, 0.5}, {4, 1.0}, {6, 1.5}});
  std::vector<int> ids;
  for (const auto& w : ordered) ids.push_back(w.feature);
  o.Require(ids == std::vector<int>({6, 4, 2}), "weight order differs from {f6,f4,f2}");
  if (o.pass) o.detail = "vote {f2,f4,f6}; order {f6,f4,f2}";
  return o;
}

// ---------------------------------------------------------------- 3

Outcome OperatorProperties() {
  Outcome o;
  Rng rng(301);
  const int pairs = 10000;
  for (int t = 0; t < pairs && o.pass; ++t) {
    const std::size_t n = 1 + rng.Index(40);
    moo::Bits p1(n), p2(n);
    for (std::size_t i = 0; i < n; ++i) {
      p1[i] = rng.Bernoulli(0.5);
      p2[i] = rng.Bernoulli(0.5);
    }
    const auto [c1, c2] = moo::UniformCrossover(p1, p2, rng);
    for (std::size_t i = 0; i < n; ++i) {
      o.Require(std::multiset<int>{c1[i], c2[i]} == std::multiset<int>{p1[i], p2[i]},
                "locus multiset not conserved");
    }
  }
  const std::size_t loci = 16;
  const moo::Bits zeros(loci, 0), ones(loci, 1);
  std::vector<int> from_p1(loci, 0);
  for (int t = 0; t < pairs; ++t) {
    const auto [c1, c2] = moo::UniformCrossover(zeros, ones, rng);
    for (std::size_t i = 0; i < loci; ++i) from_p1[i] += c1[i] == 0;
  }
  double worst_inherit = 0.0;
  for (int c : from_p1) worst_inherit = std::max(worst_inherit, std::fabs(c / double(pairs) - 0.5));
  o.Require(worst_inherit <= 0.02, Fmt("inheritance rate off by %.4f", worst_inherit));

  moo::Bits c(loci);
  for (std::size_t i = 0; i < loci; ++i) c[i] = i % 2;
  const int trials = 10000;
  long flips_min = 0;
  std::vector<int> flips_mid(loci, 0);
  for (int t = 0; t < trials; ++t) {
    const auto a = moo::FitnessScaledMutation(c, 0.2, 0.8, 0.2, rng);
    const auto b = moo::FitnessScaledMutation(c, 0.5, 0.8, 0.2, rng);
    for (std::size_t i = 0; i < loci; ++i) {
      flips_min += a[i] != c[i];
      flips_mid[i] += b[i] != c[i];
    }
  }
  const double rate_min = flips_min / double(trials * loci);
  o.Require(rate_min == 1.0, Fmt("flip rate at f_min = %.6f", rate_min));
  double worst_mid = 0.0;
  for (int f : flips_mid) worst_mid = std::max(worst_mid, std::fabs(f / double(trials) - 0.5));
  o.Require(worst_mid <= 0.02, Fmt("midpoint flip rate off by %.4f", worst_mid));
  if (o.pass) {
    o.detail = "conservation exact; inheritance max dev " + Fmt("%.4f", worst_inherit) +
               "; flip rate 1 at f_min; midpoint max dev " + Fmt("%.4f", worst_mid);
  }
  return o;
}

// ---------------------------------------------------------------- 4

std::vector<moo::Objectives> NonDominatedCloud(Rng& rng, std::size_t n) {
  // Points on the plane o1 + o2 + o3 = 1 are mutually non-dominated.
  std::vector<moo::Objectives> pts(n);
  for (auto& p : pts) {
    double s = 0.0;
    for (auto& v : p) s += (v = rng.Uniform(0.01, 1.0));
    for (auto& v : p) v /= s;
  }
  return pts;
}

std::set<std::size_t> Boundaries(const std::vector<moo::Objectives>& pts) {
  std::set<std::size_t> b;
  for (std::size_t m = 0; m < 3; ++m) {
    auto lo = std::min_element(pts.begin(), pts.end(), [&](auto& x, auto& y) { return x[m] < y[m]; });
    auto hi = std::max_element(pts.begin(), pts.end(), [&](auto& x, auto& y) { return x[m] < y[m]; });
    b.insert(static_cast<std::size_t>(lo - pts.begin()));
    b.insert(static_cast<std::size_t>(hi - pts.begin()));
  }
  return b;
}

Outcome Crowding() {
  Outcome o;
  Rng rng(401);
  const double inf = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 1000 && o.pass; ++t) {
    std::vector<moo::Objectives> pop(2 + rng.Index(40));
    for (auto& p : pop) {
      for (auto& v : p) v = rng.Uniform();
    }
    for (const auto& front : moo::NonDominatedSort(pop)) {
      std::vector<moo::Objectives> pts;
      for (std::size_t i : front) pts.push_back(pop[i]);
      const auto d = moo::CrowdingDistance(pts);
      for (std::size_t b : Boundaries(pts)) o.Require(d[b] == inf, "boundary member not infinite");
    }
  }
  const std::vector<moo::Objectives> spaced = {{0.0, 1.0, 0.5}, {0.5, 0.5, 0.5}, {1.0, 0.0, 0.5}};
  const auto d = moo::CrowdingDistance(spaced);
  o.Require(d[0] == inf && d[2] == inf, "equal-spacing boundaries not infinite");
  o.Require(std::fabs(d[1] - 2.0) <= 1e-12, Fmt("interior distance %.15f", d[1]));
  for (int t = 0; t < 1000 && o.pass; ++t) {
    const std::size_t n = 8 + rng.Index(33);
    const auto pts = NonDominatedCloud(rng, n);
    const std::size_t capacity = 6 + rng.Index(n - 6);
    const auto kept = moo::TruncateByCrowding(pts, capacity);
    o.Require(kept.size() == capacity, "truncation size");
    for (std::size_t b : Boundaries(pts)) {
      o.Require(std::find(kept.begin(), kept.end(), b) != kept.end(), "truncation dropped a boundary");
    }
  }
  if (o.pass) o.detail = "boundaries infinite; interior " + Fmt("%.15g", d[1]) + "; 1000 truncations keep boundaries";
  return o;
}

// ---------------------------------------------------------------- 5

Outcome Pareto() {
  Outcome o;
  Rng rng(501);
  for (int t = 0; t < 100 && o.pass; ++t) {
    std::vector<moo::Objectives> pop(1 + rng.Index(50));
    for (auto& p : pop) {
      for (auto& v : p) v = static_cast<double>(rng.Index(6));  // coarse grid: ties and duplicates
    }
    auto got = moo::NonDominatedSort(pop);
    auto want = ft::BruteFronts(pop);
    for (auto& f : got) std::sort(f.begin(), f.end());
    o.Require(got == want, "fronts differ from brute force at population " + std::to_string(t));
  }
  int audited = 0;
  for (auto a : {moo::Algorithm::kNsga2, moo::Algorithm::kMopso, moo::Algorithm::kMode}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      ft::StubProblem problem(14, seed);
      auto cfg = moo::OptimizerConfig::Defaults(a);
      cfg.population = 30;
      cfg.iterations = 40;
      cfg.seed = seed;
      const auto r = moo::MakeOptimizer(problem, cfg)->Run();
      o.Require(!r.archive.empty() && ft::AuditNonDominated(r.archive),
                std::string(moo::AlgorithmName(a)) + " archive fails the audit");
      ++audited;
    }
  }
  if (o.pass) o.detail = "100/100 populations match; " + std::to_string(audited) + " archives audited";
  return o;
}

// ---------------------------------------------------------------- 6

double WorstGradientError(neural::Model& model, const std::vector<std::vector<double>>& xs,
                          const std::vector<int>& ys, double l2) {
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
    const double denom = std::max({std::fabs(numeric), std::fabs(grad[k]), 1e-8});
    worst = std::max(worst, std::fabs(numeric - grad[k]) / denom);
  }
  return worst;
}

Outcome Gradients() {
  Outcome o;
  Rng rng(601);
  double worst_mlp = 0.0, worst_gru = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    neural::Mlp mlp(3, 4);
    for (auto& p : mlp.parameters()) p = rng.Uniform(-1, 1);
    neural::Gru gru(2, 3, 2, 3);
    for (auto& p : gru.parameters()) p = rng.Uniform(-1, 1);
    std::vector<std::vector<double>> xm, xg;
    std::vector<int> ys;
    for (int i = 0; i < 4; ++i) {
      xm.push_back({rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(-1, 1)});
      std::vector<double> seq(6);
      for (auto& v : seq) v = rng.Uniform(-1, 1);
      xg.push_back(seq);
      ys.push_back(i % 2);
    }
    worst_mlp = std::max(worst_mlp, WorstGradientError(mlp, xm, ys, 0.0));
    worst_gru = std::max(worst_gru, WorstGradientError(gru, xg, ys, 1e-4));
  }
  o.Require(worst_mlp < 1e-4, Fmt("mlp relative error %.3g", worst_mlp));
  o.Require(worst_gru < 1e-4, Fmt("gru relative error %.3g", worst_gru));
  o.detail = "max relative error mlp " + Fmt("%.2e", worst_mlp) + ", gru " + Fmt("%.2e", worst_gru);
  return o;
}

// ---------------------------------------------------------------- 7

Outcome GateIdentities() {
  Outcome o;
  Rng rng(701);
  const std::size_t h = 8;
  neural::Gru g(3, h, 1, 3);
  double worst_closed = 0.0, worst_open = 0.0;
  for (int t = 0; t < 100; ++t) {
    g.InitializeWeights(static_cast<std::uint64_t>(t));
    std::vector<double> x(3), h_prev(h);
    for (auto& v : x) v = rng.Uniform(-1, 1);
    for (auto& v : h_prev) v = rng.Uniform(-0.9, 0.9);
    auto bz = g.view("l0.b_z");
    std::fill(bz.begin(), bz.end(), -40.0);
    const auto closed = g.Cell(0, x, h_prev);
    std::fill(bz.begin(), bz.end(), 40.0);
    const auto open = g.Cell(0, x, h_prev);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < h; ++i) {
      a += (closed.h[i] - h_prev[i]) * (closed.h[i] - h_prev[i]);
      b += (open.h[i] - open.candidate[i]) * (open.h[i] - open.candidate[i]);
    }
    worst_closed = std::max(worst_closed, std::sqrt(a));
    worst_open = std::max(worst_open, std::sqrt(b));
  }
  o.Require(worst_closed < 1e-6, Fmt("z->0 gap %.3g", worst_closed));
  o.Require(worst_open < 1e-6, Fmt("z->1 gap %.3g", worst_open));
  long checked = 0;
  neural::Gru deep(4, 12, 2, 3);
  for (int t = 0; t < 300 && o.pass; ++t) {
    for (auto& p : deep.parameters()) p = rng.Uniform(-1, 1);
    std::vector<double> x(12);
    for (auto& v : x) v = rng.Uniform(-2, 2);
    for (const auto& layer : deep.Trace(x)) {
      std::vector<double> prev(12, 0.0);
      for (const auto& s : layer) {
        for (std::size_t i = 0; i < 12; ++i) {
          o.Require(s.h[i] >= std::min(prev[i], s.candidate[i]) &&
                        s.h[i] <= std::max(prev[i], s.candidate[i]),
                    "h outside [h_prev, candidate]");
          ++checked;
        }
        prev = s.h;
      }
    }
  }
  if (o.pass) {
    o.detail = "z->0 gap " + Fmt("%.1e", worst_closed) + ", z->1 gap " + Fmt("%.1e", worst_open) +
               ", convexity on " + std::to_string(checked) + " components";
  }
  return o;
}

// ---------------------------------------------------------------- 8

double BruteAuc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    pos += y[i];
    neg += 1 - y[i];
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] == 1 && y[j] == 0) wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  }
  return wins / (pos * neg);
}

Outcome MetricsOracles() {
  Outcome o;
  Rng rng(801);
  for (int t = 0; t < 1000 && o.pass; ++t) {
    const std::size_t n = 2 + rng.Index(60);
    std::vector<double> s(n);
    std::vector<int> y(n), flipped(n);
    for (auto& v : s) v = static_cast<double>(rng.Index(8)) / 8.0;
    for (std::size_t i = 0; i < n; ++i) y[i] = rng.Bernoulli(0.3);
    y[0] = 1;
    y[1] = 0;
    for (std::size_t i = 0; i < n; ++i) flipped[i] = 1 - y[i];
    const double auc = metrics::Auc(s, y);
    o.Require(auc == BruteAuc(s, y), "auc differs from pairwise count");
    o.Require(auc + metrics::Auc(s, flipped) == 1.0, "antisymmetry broken");
  }
  for (int t = 0; t < 1000 && o.pass; ++t) {
    const std::size_t n = 5 + rng.Index(40);
    std::vector<double> s(n), shifted(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.Index(16)) / 16.0;
      shifted[i] = s[i] + 7.0;
    }
    std::vector<int> y(n, 0);
    std::vector<metrics::FaultRank> a, b;
    const auto ra = metrics::Midranks(s), rb = metrics::Midranks(shifted);
    o.Require(ra == rb, "ranks change under a shift");
    for (int f = 0; f < 5; ++f) {
      const std::vector<int> faulty = {static_cast<int>(rng.Index(n)), static_cast<int>(rng.Index(n))};
      a.push_back(metrics::RankFault(ra, faulty));
      b.push_back(metrics::RankFault(rb, faulty));
      for (int id : faulty) y[static_cast<std::size_t>(id)] = 1;
      o.Require(a.back().average >= a.back().first, "MAR < MFR within a fault");
    }
    const auto la = metrics::Summarize(a), lb = metrics::Summarize(b);
    o.Require(la.top1 <= la.top3 && la.top3 <= la.top5, "Top-N not monotone");
    o.Require(la.top1 == lb.top1 && la.top3 == lb.top3 && la.top5 == lb.top5 && la.mar == lb.mar &&
                  la.mfr == lb.mfr,
              "summary changes under a shift");
    if (std::count(y.begin(), y.end(), 1) < static_cast<long>(n)) {
      o.Require(metrics::Auc(s, y) == metrics::Auc(shifted, y), "auc changes under a shift");
    }
  }
  const std::vector<double> folds = {0.8, 1.0};
  const double stab = metrics::MeanAndStability(folds).stability;
  o.Require(std::fabs(stab - 0.1) <= 1e-12, Fmt("stability %.15f", stab));
  if (o.pass) o.detail = "1000 auc instances exact; 1000 shift/monotonicity vectors; stability " + Fmt("%.15g", stab);
  return o;
}

// ---------------------------------------------------------------- 9

Outcome EndToEnd(const fs::path& work) {
  Outcome o;
  pipeline::RunConfig c;
  c.datasets = {"suite"};
  c.synthetic_count = 20;
  c.optimizer = moo::OptimizerConfig::Defaults(moo::Algorithm::kMopso);
  c.model = pipeline::ModelKind::kRnn;
  c.seed = 1;
  c.output = work / "end-to-end";
  pipeline::Run(c);
  const Json report = Json::parse(ft::ReadAll(c.output / "report.json"));
  double model_mfr = 0.0, tarantula_mfr = 0.0, top3 = 0.0;
  std::size_t faults = 0;
  for (const auto& r : report["rankers"]) {
    if (r["name"] == "rnn") {
      model_mfr = r["summary"]["mfr"].get<double>();
      top3 = r["summary"]["loc_acc@3"].get<double>();
      faults = r["summary"]["faults"].get<std::size_t>();
    }
    if (r["name"] == "tarantula") tarantula_mfr = r["summary"]["mfr"].get<double>();
  }
  o.Require(faults == 20, "expected 20 datasets");
  o.Require(top3 >= 0.8, Fmt("Top-3 rate %.3f", top3));
  o.Require(model_mfr < tarantula_mfr, "MFR not below tarantula");
  o.detail = "Top-3 " + Fmt("%.0f%%", 100 * top3) + ", MFR " + Fmt("%.3f", model_mfr) +
             " vs tarantula " + Fmt("%.3f", tarantula_mfr);
  return o;
}

// ---------------------------------------------------------------- 10

Outcome EvaluationCounts(const fs::path& work) {
  Outcome o;
  std::map<std::string, long> counts;
  std::map<std::string, double> wall;
  for (bool timed : {false, true}) {
    for (auto a : {moo::Algorithm::kNsga2, moo::Algorithm::kMopso}) {
      pipeline::RunConfig c;
      c.datasets = {"median3"};
      c.seed = 7;
      c.optimizer = moo::OptimizerConfig::Defaults(a);
      c.wall_clock = timed;
      c.output = work / ("counts-" + std::string(moo::AlgorithmName(a)) + (timed ? "-timed" : ""));
      pipeline::Extract(c);
      pipeline::Select(c);
      const Json evals = Json::parse(ft::ReadAll(c.output / "evals.json"));
      const std::string name(moo::AlgorithmName(a));
      if (timed) {
        wall[name] = evals["wall_clock_s"].get<double>();
      } else {
        counts[name] = evals["evaluation_count"].get<long>();
      }
    }
  }
  o.Require(counts["mopso"] < counts["nsga2"], "count(mopso) >= count(nsga2)");
  o.Require(wall["mopso"] < wall["nsga2"], "mopso wall time >= nsga2 wall time");
  o.detail = "evaluations mopso " + std::to_string(counts["mopso"]) + " < nsga2 " +
             std::to_string(counts["nsga2"]) + "; wall " + Fmt("%.2fs", wall["mopso"]) + " vs " +
             Fmt("%.2fs", wall["nsga2"]);
  return o;
}

// ---------------------------------------------------------------- 11

Outcome Determinism(const fs::path& work) {
  Outcome o;
  int identical = 0;
  for (auto a : {moo::Algorithm::kNsga2, moo::Algorithm::kMopso, moo::Algorithm::kMode}) {
    for (auto m : {pipeline::ModelKind::kMlp, pipeline::ModelKind::kRnn}) {
      std::string reports[2];
      for (int rep = 0; rep < 2; ++rep) {
        pipeline::RunConfig c;
        c.datasets = {"median3"};
        c.synthetic_count = 3;
        c.seed = 7;
        c.optimizer = moo::OptimizerConfig::Defaults(a);
        c.model = m;
        c.output = work / ("det-" + std::to_string(rep));
        pipeline::Run(c);
        reports[rep] = ft::ReadAll(c.output / "report.json");
      }
      const std::string cell = std::string(moo::AlgorithmName(a)) + "-" + std::string(pipeline::ModelName(m));
      o.Require(!reports[0].empty() && reports[0] == reports[1], cell + " reports differ");
      identical += reports[0] == reports[1];
    }
  }
  o.detail = std::to_string(identical) + "/6 optimizer x model cells byte-identical";
  return o;
}

}  // namespace

namespace ft = faultfuse::testing;

int main() {
  ft::TempDir work;
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "static feature fixture", 1, StaticFixture},
      {2, "fusion worked examples", 1, FusionExamples},
      {3, "crossover and mutation properties", 10, OperatorProperties},
      {4, "crowding distance", 10, Crowding},
      {5, "non-dominated sorting and archive audit", 30, Pareto},
      {6, "gradient oracle", 30, Gradients},
      {7, "gru gate identities", 30, GateIdentities},
      {8, "metrics oracles", 30, MetricsOracles},
      {9, "end-to-end localization", 600, [&] { return EndToEnd(work.path()); }},
      {10, "evaluation-count trend", 300, [&] { return EvaluationCounts(work.path()); }},
      {11, "run determinism", 300, [&] { return Determinism(work.path()); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (s >= c.limit_s) {
      o.pass = false;
      o.detail += Fmt(" [over the %.0f s limit]", c.limit_s);
    }
    failed += !o.pass;
    std::printf("%s criterion %2d  %-40s %8.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
