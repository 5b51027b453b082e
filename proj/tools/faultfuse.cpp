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


// Command-line front end: synth, extract, select, fuse, train, rank,
// evaluate, run and matrix.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "faultfuse/corpus.hpp"
#include "faultfuse/error.hpp"
#include "faultfuse/pipeline.hpp"
#include "faultfuse/toy_lang.hpp"

namespace ff = faultfuse;
namespace pl = faultfuse::pipeline;

namespace {

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ff::Error(ff::ErrorCode::kMissingFile, "cli", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::uint64_t> EnvSeed() {
  const char* s = std::getenv("FAULTFUSE_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') {
    throw ff::Error(ff::ErrorCode::kConfigError, "cli", std::string("FAULTFUSE_SEED is not a number: ") + s);
  }
  return v;
}

// Flags shared by every pipeline subcommand. Unset flags leave the value
// from --config (or the default) alone.
struct Flags {
  std::string config_file;
  std::vector<std::string> datasets, test_on;
  std::optional<int> synthetic_count, synthetic_tests;
  std::optional<std::string> optimizer, model;
  std::optional<int> population, iterations;
  std::optional<std::size_t> archive_capacity;
  std::optional<double> crossover, mutation, inertia, c1, c2, de_cr, de_f;
  std::optional<std::size_t> mlp_hidden, rnn_hidden;
  std::optional<int> rnn_layers, epochs, batch_size, folds, threads;
  std::optional<double> lr, l2, keep_fraction;
  bool concat = false, plain_sgd = false, wall_clock = false;
  std::optional<std::uint64_t> seed;
  std::string out;

  void Attach(CLI::App* app, bool with_optimizer_and_model) {
    app->add_option("--config", config_file, "JSON config (e.g. a resolved-config.json)");
    app->add_option("--dataset,--train-on", datasets,
                    "dataset directory, template name, template:seed or 'suite'")
        ->delimiter(',');
    app->add_option("--test-on", test_on, "datasets scored by the trained model")->delimiter(',');
    app->add_option("--synthetic-count", synthetic_count, "datasets per template name");
    app->add_option("--synthetic-tests", synthetic_tests, "tests per generated dataset");
    if (with_optimizer_and_model) {
      app->add_option("--optimizer", optimizer, "nsga2 | mopso | mode");
      app->add_option("--model", model, "mlp | rnn");
    }
    app->add_option("--population", population);
    app->add_option("--iterations", iterations);
    app->add_option("--archive-capacity", archive_capacity);
    app->add_option("--crossover-probability", crossover);
    app->add_option("--mutation-probability", mutation);
    app->add_option("--inertia", inertia);
    app->add_option("--c1", c1);
    app->add_option("--c2", c2);
    app->add_option("--de-cr", de_cr);
    app->add_option("--de-f", de_f);
    app->add_option("--mlp-hidden", mlp_hidden);
    app->add_option("--rnn-hidden", rnn_hidden);
    app->add_option("--rnn-layers", rnn_layers);
    app->add_flag("--concat", concat, "MLP input is every fused column");
    app->add_option("--epochs", epochs);
    app->add_option("--lr", lr);
    app->add_option("--l2", l2);
    app->add_option("--batch-size", batch_size, "0 = full batch");
    app->add_flag("--plain-sgd", plain_sgd, "plain gradient descent instead of Adam");
    app->add_option("--keep-fraction", keep_fraction, "fraction of features kept by fusion");
    app->add_option("--folds", folds);
    app->add_option("--seed", seed);
    app->add_option("--out", out, "output directory")->required();
    app->add_flag("--wall-clock", wall_clock, "measured time as the cost objective");
    app->add_option("--threads", threads);
  }

  void ApplyOptimizerParams(ff::moo::OptimizerConfig& o) const {
    if (population) o.population = *population;
    if (iterations) o.iterations = *iterations;
    if (archive_capacity) o.archive_capacity = *archive_capacity;
    if (crossover) o.crossover_probability = *crossover;
    if (mutation) o.mutation_probability = *mutation;
    if (inertia) o.inertia = *inertia;
    if (c1) o.c1 = *c1;
    if (c2) o.c2 = *c2;
    if (de_cr) o.de_cr = *de_cr;
    if (de_f) o.de_f = *de_f;
  }

  pl::RunConfig Resolve() const {
    pl::RunConfig c;
    if (!config_file.empty()) c = pl::ConfigFromJson(ReadText(config_file));
    if (!datasets.empty()) c.datasets = datasets;
    if (!test_on.empty()) c.test_on = test_on;
    if (synthetic_count) c.synthetic_count = *synthetic_count;
    if (synthetic_tests) c.synthetic_tests = *synthetic_tests;
    if (optimizer) {
      const auto a = ff::moo::ParseAlgorithm(*optimizer);
      if (a != c.optimizer.algorithm) c.optimizer = ff::moo::OptimizerConfig::Defaults(a);
    }
    ApplyOptimizerParams(c.optimizer);
    if (model) c.model = pl::ParseModel(*model);
    if (mlp_hidden) c.mlp_hidden = *mlp_hidden;
    if (rnn_hidden) c.rnn_hidden = *rnn_hidden;
    if (rnn_layers) c.rnn_layers = *rnn_layers;
    if (concat) c.concat = true;
    if (epochs) c.epochs = *epochs;
    if (lr) c.learning_rate = *lr;
    if (l2) c.l2 = *l2;
    if (batch_size) c.batch_size = *batch_size;
    if (plain_sgd) c.plain_sgd = true;
    if (keep_fraction) c.keep_fraction = *keep_fraction;
    if (folds) c.folds = *folds;
    if (seed) c.seed = *seed;
    if (const auto env = EnvSeed()) c.seed = *env;
    if (wall_clock) c.wall_clock = true;
    if (threads) c.threads = *threads;
    c.output = out;
    c.Validate();
    return c;
  }
};

struct SynthFlags {
  std::string template_name = "median3";
  int tests = 100;
  int statements = 0;
  std::uint64_t seed = 0;
  std::string fault;
  std::string rule;
  std::string out;
};

void Synth(const SynthFlags& f) {
  ff::corpus::SyntheticSpec spec;
  spec.template_name = f.template_name;
  spec.tests = f.tests;
  spec.statements = f.statements;
  spec.seed = f.seed;
  if (const auto env = EnvSeed()) spec.seed = *env;
  if (!f.fault.empty()) {
    // Statements are numbered S1, S2, ... in listings; ids start at 0.
    std::string digits = f.fault;
    if (digits[0] == 'S' || digits[0] == 's') digits.erase(0, 1);
    char* end = nullptr;
    const long n = std::strtol(digits.c_str(), &end, 10);
    if (digits.empty() || *end != '\0' || n < 1) {
      throw ff::Error(ff::ErrorCode::kConfigError, "cli", "bad --fault '" + f.fault + "' (expected S<n>)");
    }
    spec.fault_statement = static_cast<int>(n - 1);
  }
  if (!f.rule.empty()) {
    spec.fault_rule = ff::toy::ParseMutationOperator(f.rule);
    if (!spec.fault_rule) throw ff::Error(ff::ErrorCode::kConfigError, "cli", "unknown --rule '" + f.rule + "'");
  }
  const auto d = ff::corpus::GenerateSynthetic(spec);
  ff::corpus::SaveDataset(d, f.out);
  std::cout << "wrote " << f.out << " (" << d.statement_count() << " statements, "
            << d.test_count() << " tests, " << d.failing_count() << " failing)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"faultfuse: multi-objective feature fusion for fault localization"};
  app.require_subcommand(1);

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic single-fault dataset");
  synth_cmd->add_option("--template", synth.template_name, "median3 | triangle | maxarray");
  synth_cmd->add_option("--tests", synth.tests);
  synth_cmd->add_option("--statements", synth.statements, "array length for maxarray");
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--fault", synth.fault, "statement to corrupt, e.g. S7");
  synth_cmd->add_option("--rule", synth.rule, "mutation operator used to corrupt it");
  synth_cmd->add_option("--out", synth.out, "dataset directory")->required();

  struct Stage {
    const char* name;
    const char* help;
    std::function<void(const pl::RunConfig&)> fn;
  };
  const std::vector<Stage> stages = {
      {"extract", "write <dataset>/features.csv", pl::Extract},
      {"select", "run the optimizer: pareto.json, evals.json", pl::Select},
      {"fuse", "vote and weigh: fused.json", pl::FuseStage},
      {"train", "train the final model: model.json, loss.csv", pl::TrainStage},
      {"rank", "score statements: <dataset>/scores.csv", pl::Rank},
      {"evaluate", "report.json, report.tsv", pl::Evaluate},
      {"run", "every stage, atomically", pl::Run},
  };
  std::vector<Flags> stage_flags(stages.size());
  std::vector<CLI::App*> stage_cmds;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    auto* cmd = app.add_subcommand(stages[i].name, stages[i].help);
    stage_flags[i].Attach(cmd, true);
    stage_cmds.push_back(cmd);
  }

  Flags matrix;
  std::vector<std::string> matrix_optimizers = {"nsga2", "mopso", "mode"};
  std::vector<std::string> matrix_models = {"mlp", "rnn"};
  auto* matrix_cmd = app.add_subcommand("matrix", "run every optimizer x model cell");
  matrix.Attach(matrix_cmd, false);
  matrix_cmd->add_option("--optimizers", matrix_optimizers)->delimiter(',');
  matrix_cmd->add_option("--models", matrix_models)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ff::ExitCodeFor(ff::ErrorCode::kConfigError);
  }

  try {
    if (synth_cmd->parsed()) {
      Synth(synth);
      return 0;
    }
    for (std::size_t i = 0; i < stages.size(); ++i) {
      if (!stage_cmds[i]->parsed()) continue;
      const pl::RunConfig config = stage_flags[i].Resolve();
      stages[i].fn(config);
      std::cout << stages[i].name << ": wrote " << config.output.string() << "\n";
      return 0;
    }
    if (matrix_cmd->parsed()) {
      const pl::RunConfig config = matrix.Resolve();
      std::vector<ff::moo::OptimizerConfig> optimizers;
      for (const auto& name : matrix_optimizers) {
        auto o = ff::moo::OptimizerConfig::Defaults(ff::moo::ParseAlgorithm(name));
        matrix.ApplyOptimizerParams(o);
        optimizers.push_back(o);
      }
      std::vector<pl::ModelKind> models;
      for (const auto& name : matrix_models) models.push_back(pl::ParseModel(name));
      pl::Matrix(config, optimizers, models);
      std::cout << "matrix: wrote " << (config.output / "matrix.tsv").string() << "\n";
      return 0;
    }
  } catch (const ff::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ff::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
