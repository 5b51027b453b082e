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
#include <chrono>
#include <cmath>

#include "faultfuse/error.hpp"
#include "faultfuse/moo.hpp"

namespace faultfuse::moo {
namespace {

constexpr const char* kModule = "moo";

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Non-dominated members, one per bit string, sorted by bit string, with
// crowding computed among them.
std::vector<Individual> CanonicalFront(std::vector<Individual> candidates) {
  std::vector<Objectives> pts;
  for (const auto& c : candidates) pts.push_back(c.objectives);
  std::vector<Individual> front;
  if (!candidates.empty()) {
    const auto fronts = NonDominatedSort(pts);
    for (std::size_t i : fronts.front()) front.push_back(candidates[i]);
  }
  std::sort(front.begin(), front.end(), [](const Individual& a, const Individual& b) { return a.bits < b.bits; });
  front.erase(std::unique(front.begin(), front.end(),
                          [](const Individual& a, const Individual& b) { return a.bits == b.bits; }),
              front.end());
  pts.clear();
  for (const auto& m : front) pts.push_back(m.objectives);
  const std::vector<double> d = CrowdingDistance(pts);
  for (std::size_t i = 0; i < front.size(); ++i) front[i].crowding = d[i];
  return front;
}

}  // namespace

std::string_view AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kNsga2: return "nsga2";
    case Algorithm::kMopso: return "mopso";
    case Algorithm::kMode: return "mode";
  }
  return "?";
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kNsga2, Algorithm::kMopso, Algorithm::kMode}) {
    if (AlgorithmName(a) == name) return a;
  }
  throw Error(ErrorCode::kConfigError, kModule,
              "unknown optimizer '" + std::string(name) + "' (expected nsga2, mopso or mode)");
}

OptimizerConfig OptimizerConfig::Defaults(Algorithm algorithm) {
  OptimizerConfig c;
  c.algorithm = algorithm;
  c.population = 100;
  c.iterations = algorithm == Algorithm::kNsga2 ? 200 : 100;
  return c;
}

void OptimizerConfig::Validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfigError, kModule, msg); };
  if (population <= 0) fail("population must be positive");
  if (iterations <= 0) fail("iterations must be positive");
  if (threads <= 0) fail("threads must be positive");
  if (archive_capacity == 0) fail("archive capacity must be positive");
  if (algorithm == Algorithm::kMode && population < 4) fail("MODE needs a population of at least 4");
  for (double p : {crossover_probability, mutation_probability, de_cr}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
  if (!(v_min <= v_max)) fail("v_min must not exceed v_max");
  if (!std::isfinite(de_f) || !std::isfinite(inertia) || !std::isfinite(c1) || !std::isfinite(c2)) {
    fail("non-finite coefficient");
  }
}

Optimizer::Optimizer(const Problem& problem, OptimizerConfig config)
    : config_(std::move(config)), evaluator_(problem, config_.threads, config_.memoize), dim_(problem.dimension()) {
  config_.Validate();
  if (dim_ == 0) throw Error(ErrorCode::kConfigError, kModule, "empty genome");
}

Rng Optimizer::StreamFor(std::uint64_t member) {
  return Rng::Derive(config_.seed, {static_cast<std::uint64_t>(generation_), member});
}

RunResult Optimizer::Run() {
  const auto start = std::chrono::steady_clock::now();
  Initialize();
  while (generation_ < config_.iterations) Step();
  RunResult r;
  r.optimizer = std::string(AlgorithmName(config_.algorithm));
  r.archive = Front();
  r.evaluations = evaluator_.count();
  r.distinct_evaluations = evaluator_.distinct();
  r.generations = generation_;
  r.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ------------------------------------------------------------------ NSGA-II

void Nsga2::Initialize() {
  generation_ = 0;
  std::vector<Bits> genomes;
  for (int m = 0; m < config_.population; ++m) {
    Rng rng = StreamFor(static_cast<std::uint64_t>(m));
    Bits b(dim_);
    for (auto& g : b) g = rng.Bernoulli(0.5);
    RepairEmpty(b, rng);
    genomes.push_back(std::move(b));
  }
  const auto objs = evaluator_.EvaluateBatch(genomes);
  population_.clear();
  for (std::size_t i = 0; i < genomes.size(); ++i) population_.push_back({genomes[i], objs[i], 0.0});
  AssignRanks();
}

void Nsga2::SetPopulation(std::vector<Individual> population) {
  population_ = std::move(population);
  AssignRanks();
}

void Nsga2::AssignRanks() {
  std::vector<Objectives> pts;
  for (const auto& p : population_) pts.push_back(p.objectives);
  const auto fronts = NonDominatedSort(pts);
  rank_.assign(population_.size(), 0);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<Objectives> fp;
    for (std::size_t i : fronts[f]) fp.push_back(pts[i]);
    const std::vector<double> d = CrowdingDistance(fp);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      rank_[fronts[f][k]] = static_cast<int>(f);
      population_[fronts[f][k]].crowding = d[k];
    }
  }
}

std::size_t Nsga2::Tournament(Rng& rng) const {
  const std::size_t a = rng.Index(population_.size());
  const std::size_t b = rng.Index(population_.size());
  if (rank_[a] != rank_[b]) return rank_[a] < rank_[b] ? a : b;
  if (population_[a].crowding != population_[b].crowding) {
    return population_[a].crowding > population_[b].crowding ? a : b;
  }
  return population_[b].bits < population_[a].bits ? b : a;
}

void Nsga2::Step() {
  ++generation_;
  const int max_rank = *std::max_element(rank_.begin(), rank_.end());
  // Fitness: higher is better, so the first front is fittest.
  auto fitness = [&](std::size_t i) { return static_cast<double>(max_rank - rank_[i]); };
  const double f_max = max_rank, f_min = 0.0;

  std::vector<Bits> children;
  const std::size_t n = population_.size();
  for (std::size_t pair = 0; children.size() < n; ++pair) {
    Rng rng = StreamFor(pair);
    const std::size_t a = Tournament(rng), b = Tournament(rng);
    auto [c1, c2] = rng.Uniform() < config_.crossover_probability
                        ? UniformCrossover(population_[a].bits, population_[b].bits, rng)
                        : std::pair<Bits, Bits>{population_[a].bits, population_[b].bits};
    const double f_child = (fitness(a) + fitness(b)) / 2.0;
    for (Bits* c : {&c1, &c2}) {
      if (children.size() == n) break;
      Bits m = FitnessScaledMutation(*c, f_child, f_max, f_min, rng, config_.mutation_probability);
      RepairEmpty(m, rng);
      children.push_back(std::move(m));
    }
  }
  const auto objs = evaluator_.EvaluateBatch(children);
  offspring_.clear();
  for (std::size_t i = 0; i < children.size(); ++i) offspring_.push_back({children[i], objs[i], 0.0});

  std::vector<Individual> combined = population_;
  combined.insert(combined.end(), offspring_.begin(), offspring_.end());
  std::vector<Objectives> pts;
  for (const auto& c : combined) pts.push_back(c.objectives);
  std::vector<Individual> next;
  for (const auto& front : NonDominatedSort(pts)) {
    if (next.size() + front.size() <= n) {
      for (std::size_t i : front) next.push_back(combined[i]);
      continue;
    }
    std::vector<Objectives> fp;
    for (std::size_t i : front) fp.push_back(pts[i]);
    const std::vector<double> d = CrowdingDistance(fp);
    std::vector<std::size_t> order(front.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (d[x] != d[y]) return d[x] > d[y];
      return combined[front[x]].bits < combined[front[y]].bits;
    });
    for (std::size_t k = 0; next.size() < n; ++k) next.push_back(combined[front[order[k]]]);
    break;
  }
  population_ = std::move(next);
  AssignRanks();
}

std::vector<Individual> Nsga2::Front() const { return CanonicalFront(population_); }

// -------------------------------------------------------------------- MOPSO

std::vector<double> Mopso::UpdateVelocity(const std::vector<double>& v, const Bits& x, const Bits& pbest,
                                          const Bits& leader, double w, double c1, double c2, double v_min,
                                          double v_max, Rng& rng) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r1 = rng.Uniform(), r2 = rng.Uniform();
    const double next = w * v[i] + c1 * r1 * (double(pbest[i]) - x[i]) + c2 * r2 * (double(leader[i]) - x[i]);
    out[i] = std::clamp(next, v_min, v_max);
  }
  return out;
}

Bits Mopso::SamplePosition(const std::vector<double>& v, Rng& rng) {
  Bits b(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) b[i] = rng.Uniform() < Sigmoid(v[i]);
  return b;
}

const Individual& Mopso::PickLeader(Rng& rng) const {
  const auto& m = archive_.members();
  const std::size_t a = rng.Index(m.size()), b = rng.Index(m.size());
  if (m[a].crowding != m[b].crowding) return m[a].crowding > m[b].crowding ? m[a] : m[b];
  return m[std::min(a, b)];
}

void Mopso::Initialize() {
  generation_ = 0;
  std::vector<Bits> positions;
  swarm_.clear();
  for (int m = 0; m < config_.population; ++m) {
    Rng rng = StreamFor(static_cast<std::uint64_t>(m));
    Particle p;
    p.velocity.resize(dim_);
    for (auto& v : p.velocity) v = rng.Uniform(config_.v_min, config_.v_max);
    Bits b = SamplePosition(p.velocity, rng);
    RepairEmpty(b, rng);
    positions.push_back(b);
    swarm_.push_back(std::move(p));
  }
  const auto objs = evaluator_.EvaluateBatch(positions);
  for (std::size_t i = 0; i < swarm_.size(); ++i) {
    swarm_[i].current = {positions[i], objs[i], 0.0};
    swarm_[i].best = swarm_[i].current;
    archive_.Offer(swarm_[i].current);
  }
  // The initial swarm counts as the first iteration.
  generation_ = 1;
}

void Mopso::Step() {
  ++generation_;
  std::vector<Bits> positions;
  std::vector<Rng> streams;
  for (std::size_t m = 0; m < swarm_.size(); ++m) {
    Rng rng = StreamFor(m);
    Particle& p = swarm_[m];
    const Individual& leader = PickLeader(rng);
    p.velocity = UpdateVelocity(p.velocity, p.current.bits, p.best.bits, leader.bits, config_.inertia,
                                config_.c1, config_.c2, config_.v_min, config_.v_max, rng);
    Bits b = SamplePosition(p.velocity, rng);
    RepairEmpty(b, rng);
    positions.push_back(std::move(b));
    streams.push_back(rng);
  }
  const auto objs = evaluator_.EvaluateBatch(positions);
  for (std::size_t m = 0; m < swarm_.size(); ++m) {
    Particle& p = swarm_[m];
    p.current = {positions[m], objs[m], 0.0};
    if (Dominates(p.current.objectives, p.best.objectives)) {
      p.best = p.current;
    } else if (!Dominates(p.best.objectives, p.current.objectives) && streams[m].Bernoulli(0.5)) {
      p.best = p.current;
    }
    archive_.Offer(p.current);
  }
}

// --------------------------------------------------------------------- MODE

std::vector<double> Mode::DeMutant(const std::vector<double>& xa, const std::vector<double>& xb,
                                   const std::vector<double>& xc, double f) {
  std::vector<double> v(xa.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = xa[i] + f * (xb[i] - xc[i]);
  return v;
}

std::vector<double> Mode::BinomialCrossover(const std::vector<double>& target, const std::vector<double>& mutant,
                                            double cr, std::size_t j_rand, Rng& rng) {
  std::vector<double> u(target.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = (rng.Uniform() < cr || j == j_rand) ? mutant[j] : target[j];
  return u;
}

Bits Mode::Threshold(const std::vector<double>& u, Rng& rng) {
  Bits b(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) b[j] = Sigmoid(u[j]) > rng.Uniform();
  return b;
}

void Mode::Initialize() {
  generation_ = 0;
  agents_.clear();
  std::vector<Bits> genomes;
  for (int m = 0; m < config_.population; ++m) {
    Rng rng = StreamFor(static_cast<std::uint64_t>(m));
    Agent a;
    a.genome.resize(dim_);
    for (auto& g : a.genome) g = rng.Uniform(-1.0, 1.0);
    Bits b = Threshold(a.genome, rng);
    RepairEmpty(b, rng);
    genomes.push_back(b);
    agents_.push_back(std::move(a));
  }
  const auto objs = evaluator_.EvaluateBatch(genomes);
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    agents_[i].ind = {genomes[i], objs[i], 0.0};
    archive_.Offer(agents_[i].ind);
  }
}

void Mode::Step() {
  ++generation_;
  const std::size_t n = agents_.size();
  std::vector<std::vector<double>> trials;
  std::vector<Bits> bits;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = StreamFor(i);
    std::size_t pick[3];
    for (int k = 0; k < 3; ++k) {
      std::size_t c;
      do {
        c = rng.Index(n);
      } while (c == i || std::find(pick, pick + k, c) != pick + k);
      pick[k] = c;
    }
    const auto mutant = DeMutant(agents_[pick[0]].genome, agents_[pick[1]].genome, agents_[pick[2]].genome,
                                 config_.de_f);
    auto trial = BinomialCrossover(agents_[i].genome, mutant, config_.de_cr, rng.Index(dim_), rng);
    Bits b = Threshold(trial, rng);
    RepairEmpty(b, rng);
    trials.push_back(std::move(trial));
    bits.push_back(std::move(b));
  }
  const auto objs = evaluator_.EvaluateBatch(bits);
  for (std::size_t i = 0; i < n; ++i) {
    const Individual cand{bits[i], objs[i], 0.0};
    if (Dominates(cand.objectives, agents_[i].ind.objectives)) {
      agents_[i].genome = trials[i];
      agents_[i].ind = cand;
      archive_.Offer(cand);
    } else if (!Dominates(agents_[i].ind.objectives, cand.objectives)) {
      archive_.Offer(cand);
    }
  }
}

std::unique_ptr<Optimizer> MakeOptimizer(const Problem& problem, const OptimizerConfig& config) {
  switch (config.algorithm) {
    case Algorithm::kNsga2: return std::make_unique<Nsga2>(problem, config);
    case Algorithm::kMopso: return std::make_unique<Mopso>(problem, config);
    case Algorithm::kMode: return std::make_unique<Mode>(problem, config);
  }
  throw Error(ErrorCode::kConfigError, kModule, "unknown optimizer");
}

}  // namespace faultfuse::moo
