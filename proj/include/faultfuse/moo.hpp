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

#ifndef FAULTFUSE_MOO_HPP_
#define FAULTFUSE_MOO_HPP_

// Binary multi-objective feature selection: genome operators, Pareto
// machinery, the wrapper objective and three optimizers (NSGA-II, MOPSO,
// MODE). All objectives are minimized.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faultfuse/corpus.hpp"
#include "faultfuse/random.hpp"

namespace faultfuse::moo {

using Bits = std::vector<std::uint8_t>;
using Objectives = std::array<double, 3>;  // 1 - Acc, Stability, cost

std::string BitString(const Bits& bits);
Bits ParseBits(std::string_view s);  // throws kConfigError

// ---------------------------------------------------------------- operators

// Per locus one r in [0,1): r < 0.5 keeps parents in place, otherwise they
// swap. Errors: kLengthMismatch.
std::pair<Bits, Bits> UniformCrossover(const Bits& p1, const Bits& p2, Rng& rng);

// ceiling * (f_max - f_i) / (f_max - f_min); ceiling * 0.5 when f_max == f_min.
double MutationProbability(double f_i, double f_max, double f_min, double ceiling = 1.0);

// Flips each gene independently with MutationProbability(...).
Bits FitnessScaledMutation(const Bits& c, double f_i, double f_max, double f_min, Rng& rng,
                           double ceiling = 1.0);

// An all-zero genome gets one uniformly chosen bit set.
void RepairEmpty(Bits& bits, Rng& rng);

// ------------------------------------------------------------ Pareto tools

// Weakly better everywhere and strictly better somewhere.
bool Dominates(const Objectives& a, const Objectives& b);

// Fronts of indices, best first; each front ascending.
std::vector<std::vector<std::size_t>> NonDominatedSort(std::span<const Objectives> points);

// Per member; +inf for boundary members and for fronts of size <= 2.
// Objectives constant over the front contribute nothing.
std::vector<double> CrowdingDistance(std::span<const Objectives> front);

// Drops the least-crowded member (latest index on ties), recomputing the
// distances after each removal, until `capacity` remain. Returns the kept
// indices in ascending order.
std::vector<std::size_t> TruncateByCrowding(std::span<const Objectives> front, std::size_t capacity);

bool MutuallyNonDominated(std::span<const Objectives> points);

struct Individual {
  Bits bits;
  Objectives objectives{};
  double crowding = 0.0;

  friend bool operator==(const Individual&, const Individual&) = default;
};

// Bounded non-dominated set kept sorted by bit string.
class Archive {
 public:
  explicit Archive(std::size_t capacity) : capacity_(capacity) {}

  // Returns true when the candidate entered. Dominated and duplicate
  // candidates are refused; members the candidate dominates leave.
  bool Offer(const Individual& candidate);

  const std::vector<Individual>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t capacity() const { return capacity_; }

  // Refreshes members' crowding fields.
  void UpdateCrowding();

 private:
  std::size_t capacity_;
  std::vector<Individual> members_;
};

// ------------------------------------------------------------- objectives

class Problem {
 public:
  virtual ~Problem() = default;
  virtual std::size_t dimension() const = 0;
  // Deterministic in `bits`; must be safe to call concurrently.
  virtual Objectives Evaluate(const Bits& bits) const = 0;
};

// Counts every requested evaluation and memoizes by bit string. Batches are
// spread over `threads` workers; results do not depend on the worker count.
class Evaluator {
 public:
  // memoize = false runs every request, e.g. when the objectives are timings.
  Evaluator(const Problem& problem, int threads = 1, bool memoize = true)
      : problem_(problem), threads_(threads), memoize_(memoize) {}

  Objectives Evaluate(const Bits& bits);
  std::vector<Objectives> EvaluateBatch(const std::vector<Bits>& batch);

  long count() const { return count_; }
  long distinct() const { return distinct_; }  // problem evaluations actually run
  const Problem& problem() const { return problem_; }

 private:
  const Problem& problem_;
  int threads_;
  bool memoize_;
  long count_ = 0;
  long distinct_ = 0;
  std::map<Bits, Objectives> cache_;
};

struct SurrogateConfig {
  int epochs = 20;
  double learning_rate = 0.1;
  bool wall_clock = false;  // cost = measured T_avg * instances instead of |selected| / total
};

// Wrapper objective: a logistic unit trained per fold on the selected
// columns. Acc = held-out accuracy (threshold 0.5) averaged over folds,
// Stability = population std of the fold accuracies.
class WrapperProblem : public Problem {
 public:
  // `x` is row-major rows x cols.
  WrapperProblem(std::vector<double> x, std::size_t cols, std::vector<int> labels,
                 std::vector<corpus::Fold> folds, std::uint64_t seed, SurrogateConfig config = {});

  std::size_t dimension() const override { return cols_; }
  Objectives Evaluate(const Bits& bits) const override;

  // Per-fold held-out accuracies for a selection (kEmptySelection if none).
  std::vector<double> FoldAccuracies(const Bits& bits) const;

 private:
  std::vector<double> x_;
  std::size_t cols_;
  std::vector<int> labels_;
  std::vector<corpus::Fold> folds_;
  std::uint64_t seed_;
  SurrogateConfig config_;
};

// ------------------------------------------------------------- optimizers

enum class Algorithm { kNsga2, kMopso, kMode };

std::string_view AlgorithmName(Algorithm a);
Algorithm ParseAlgorithm(std::string_view name);  // throws kConfigError

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::kNsga2;
  int population = 100;
  int iterations = 200;
  std::uint64_t seed = 0;
  int threads = 1;
  bool memoize = true;
  std::size_t archive_capacity = 100;
  // NSGA-II
  double crossover_probability = 0.6;
  double mutation_probability = 0.1;  // ceiling on the fitness-scaled rate
  double crossover_distribution_index = 1.0;  // recorded, unused by binary operators
  double mutation_distribution_index = 1.0;   // recorded, unused by binary operators
  // MOPSO
  double inertia = 0.4;
  double c1 = 1.5;
  double c2 = 2.0;
  double v_min = -1.0;
  double v_max = 1.0;
  // MODE
  double de_cr = 0.5;
  double de_f = 0.2;

  // Published settings for each algorithm.
  static OptimizerConfig Defaults(Algorithm algorithm);
  void Validate() const;  // kConfigError
};

struct RunResult {
  std::string optimizer;
  std::vector<Individual> archive;  // sorted by bit string
  long evaluations = 0;
  long distinct_evaluations = 0;
  int generations = 0;
  double wall_clock_s = 0.0;
};

class Optimizer {
 public:
  Optimizer(const Problem& problem, OptimizerConfig config);
  virtual ~Optimizer() = default;

  virtual void Initialize() = 0;
  virtual void Step() = 0;
  // Current non-dominated set.
  virtual std::vector<Individual> Front() const = 0;

  // Initialize, then step until the iteration budget is spent.
  RunResult Run();

  int generation() const { return generation_; }
  long evaluations() const { return evaluator_.count(); }
  const OptimizerConfig& config() const { return config_; }

 protected:
  Rng StreamFor(std::uint64_t member);

  OptimizerConfig config_;
  Evaluator evaluator_;
  int generation_ = 0;
  std::size_t dim_;
};

class Nsga2 : public Optimizer {
 public:
  Nsga2(const Problem& problem, OptimizerConfig config) : Optimizer(problem, std::move(config)) {}

  void Initialize() override;
  void Step() override;
  std::vector<Individual> Front() const override;

  const std::vector<Individual>& population() const { return population_; }
  const std::vector<Individual>& last_offspring() const { return offspring_; }

  // Seeds the population directly (tests).
  void SetPopulation(std::vector<Individual> population);

 private:
  void AssignRanks();
  std::size_t Tournament(Rng& rng) const;

  std::vector<Individual> population_;
  std::vector<Individual> offspring_;
  std::vector<int> rank_;
};

class Mopso : public Optimizer {
 public:
  Mopso(const Problem& problem, OptimizerConfig config)
      : Optimizer(problem, std::move(config)), archive_(config_.archive_capacity) {}

  void Initialize() override;
  void Step() override;
  std::vector<Individual> Front() const override { return archive_.members(); }

  // v' = w v + c1 r1 (pbest - x) + c2 r2 (leader - x), clamped; r1, r2 per locus.
  static std::vector<double> UpdateVelocity(const std::vector<double>& v, const Bits& x,
                                            const Bits& pbest, const Bits& leader, double w,
                                            double c1, double c2, double v_min, double v_max,
                                            Rng& rng);
  // Bit set with probability sigmoid(v).
  static Bits SamplePosition(const std::vector<double>& v, Rng& rng);

 private:
  const Individual& PickLeader(Rng& rng) const;

  struct Particle {
    Individual current;
    Individual best;
    std::vector<double> velocity;
  };
  std::vector<Particle> swarm_;
  Archive archive_;
};

class Mode : public Optimizer {
 public:
  Mode(const Problem& problem, OptimizerConfig config)
      : Optimizer(problem, std::move(config)), archive_(config_.archive_capacity) {}

  void Initialize() override;
  void Step() override;
  std::vector<Individual> Front() const override { return archive_.members(); }

  // x_a + F (x_b - x_c)
  static std::vector<double> DeMutant(const std::vector<double>& xa, const std::vector<double>& xb,
                                      const std::vector<double>& xc, double f);
  // Binomial crossover; locus j_rand always takes the mutant.
  static std::vector<double> BinomialCrossover(const std::vector<double>& target,
                                               const std::vector<double>& mutant, double cr,
                                               std::size_t j_rand, Rng& rng);
  // Bit set where sigmoid(u) > r, r uniform per locus.
  static Bits Threshold(const std::vector<double>& u, Rng& rng);

 private:
  struct Agent {
    std::vector<double> genome;
    Individual ind;
  };
  std::vector<Agent> agents_;
  Archive archive_;
};

std::unique_ptr<Optimizer> MakeOptimizer(const Problem& problem, const OptimizerConfig& config);

}  // namespace faultfuse::moo

#endif  // FAULTFUSE_MOO_HPP_
