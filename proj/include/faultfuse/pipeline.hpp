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


#ifndef FAULTFUSE_PIPELINE_HPP_
#define FAULTFUSE_PIPELINE_HPP_

// End-to-end orchestration. Stages exchange data only through files in the
// output directory:
//
//   extract   <dataset>/features.csv
//   select    pareto.json, evals.json
//   fuse      fused.json
//   train     model.json, loss.csv
//   rank      <dataset>/scores.csv
//   evaluate  report.json, report.tsv

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faultfuse/corpus.hpp"
#include "faultfuse/features.hpp"
#include "faultfuse/moo.hpp"
#include "faultfuse/neural.hpp"

namespace faultfuse::pipeline {

enum class ModelKind { kMlp, kRnn };

std::string_view ModelName(ModelKind kind);    // "mlp", "rnn"
ModelKind ParseModel(std::string_view name);   // throws kConfigError

struct RunConfig {
  // Each entry is a dataset directory, a template name (expands to
  // `synthetic_count` generated datasets seeded seed, seed+1, ...), the word
  // "suite" (round-robin over all templates) or "template:seed" for exactly
  // one generated dataset.
  std::vector<std::string> datasets;
  // Cross-dataset mode: when non-empty the model is trained on `datasets`
  // and scored on these instead of by cross-validation.
  std::vector<std::string> test_on;
  int synthetic_count = 6;
  int synthetic_tests = 100;

  moo::OptimizerConfig optimizer = moo::OptimizerConfig::Defaults(moo::Algorithm::kNsga2);

  ModelKind model = ModelKind::kRnn;
  std::size_t mlp_hidden = 128;
  std::size_t rnn_hidden = 64;
  int rnn_layers = 2;
  bool concat = false;  // MLP takes every fused column instead of 3 family means
  int epochs = 100;
  double learning_rate = 0.001;
  std::optional<double> l2;  // default: 0 for mlp, 1e-4 for rnn
  int batch_size = 32;       // 0 = full batch
  bool plain_sgd = false;

  double keep_fraction = 1.0 / 3.0;
  int folds = 10;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  bool wall_clock = false;
  int threads = 1;

  double EffectiveL2() const;
  int Keep(std::size_t feature_count) const;
  void Validate() const;  // kConfigError
};

// JSON round trip. Missing keys take defaults; when "optimizer" names an
// algorithm its own defaults apply before any explicit parameter. The output
// directory is not serialized. Errors: kConfigError.
std::string ConfigToJson(const RunConfig& config);
RunConfig ConfigFromJson(std::string_view json);

// Datasets named by `specs`, in order. Errors: kMissingFile, kConfigError
// (duplicate names), kNoFaults (a dataset without faults, path in message),
// plus any loader or generator error.
std::vector<corpus::FaultDataset> ResolveDatasets(const std::vector<std::string>& specs,
                                                  const RunConfig& config);

// Model construction and checkpoints.
std::unique_ptr<neural::Model> MakeModel(const RunConfig& config,
                                         const std::vector<neural::FusedColumn>& fused);
std::vector<double> ModelInput(const neural::Model& model, std::span<const double> row,
                               const std::vector<neural::FusedColumn>& fused, bool concat);
std::string ModelToJson(const neural::Model& model, const RunConfig& config, int epoch);
std::unique_ptr<neural::Model> ModelFromJson(std::string_view json);

// Stages. Each reads its inputs from config.output and (re)writes its own
// artifacts there, one file at a time via rename.
void Extract(const RunConfig& config);
void Select(const RunConfig& config);
void FuseStage(const RunConfig& config);
void TrainStage(const RunConfig& config);
void Rank(const RunConfig& config);
void Evaluate(const RunConfig& config);

// All stages plus resolved-config.json, built in a sibling temporary
// directory that replaces config.output only on success.
void Run(const RunConfig& config);

// One Run per (optimizer, model) cell into output/<algorithm>-<model>, cells
// in parallel over config.threads, then output/matrix.tsv stacking every
// cell's report rows. `config.optimizer` is ignored.
void Matrix(const RunConfig& config, const std::vector<moo::OptimizerConfig>& optimizers,
            const std::vector<ModelKind>& models);

}  // namespace faultfuse::pipeline

#endif  // FAULTFUSE_PIPELINE_HPP_
