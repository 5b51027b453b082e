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
#include <set>

#include "faultfuse/error.hpp"
#include "faultfuse/pipeline.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace faultfuse::pipeline {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kModule = "pipeline";

[[noreturn]] void ConfigFail(const std::string& msg) {
  throw Error(ErrorCode::kConfigError, kModule, msg);
}

void CheckKeys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) ConfigFail(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      ConfigFail("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void Take(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Json OptimizerJson(const moo::OptimizerConfig& o) {
  Json j;
  j["algorithm"] = std::string(moo::AlgorithmName(o.algorithm));
  j["population"] = o.population;
  j["iterations"] = o.iterations;
  j["archive_capacity"] = o.archive_capacity;
  j["crossover_probability"] = o.crossover_probability;
  j["mutation_probability"] = o.mutation_probability;
  j["crossover_distribution_index"] = o.crossover_distribution_index;
  j["mutation_distribution_index"] = o.mutation_distribution_index;
  j["inertia"] = o.inertia;
  j["c1"] = o.c1;
  j["c2"] = o.c2;
  j["v_min"] = o.v_min;
  j["v_max"] = o.v_max;
  j["de_cr"] = o.de_cr;
  j["de_f"] = o.de_f;
  return j;
}

moo::OptimizerConfig OptimizerFromJson(const Json& j) {
  CheckKeys(j, {"algorithm", "population", "iterations", "archive_capacity",
                "crossover_probability", "mutation_probability", "crossover_distribution_index",
                "mutation_distribution_index", "inertia", "c1", "c2", "v_min", "v_max", "de_cr",
                "de_f"},
            "optimizer");
  moo::Algorithm a = moo::Algorithm::kNsga2;
  if (j.contains("algorithm")) a = moo::ParseAlgorithm(j.at("algorithm").get<std::string>());
  moo::OptimizerConfig o = moo::OptimizerConfig::Defaults(a);
  Take(j, "population", o.population);
  Take(j, "iterations", o.iterations);
  Take(j, "archive_capacity", o.archive_capacity);
  Take(j, "crossover_probability", o.crossover_probability);
  Take(j, "mutation_probability", o.mutation_probability);
  Take(j, "crossover_distribution_index", o.crossover_distribution_index);
  Take(j, "mutation_distribution_index", o.mutation_distribution_index);
  Take(j, "inertia", o.inertia);
  Take(j, "c1", o.c1);
  Take(j, "c2", o.c2);
  Take(j, "v_min", o.v_min);
  Take(j, "v_max", o.v_max);
  Take(j, "de_cr", o.de_cr);
  Take(j, "de_f", o.de_f);
  return o;
}

bool IsTemplate(const std::string& name) {
  const auto names = corpus::TemplateNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

corpus::FaultDataset Generate(const std::string& tmpl, std::uint64_t seed, int tests) {
  corpus::SyntheticSpec spec;
  spec.template_name = tmpl;
  spec.tests = tests;
  spec.seed = seed;
  return corpus::GenerateSynthetic(spec);
}

}  // namespace

std::string_view ModelName(ModelKind kind) { return kind == ModelKind::kMlp ? "mlp" : "rnn"; }

ModelKind ParseModel(std::string_view name) {
  if (name == "mlp") return ModelKind::kMlp;
  if (name == "rnn") return ModelKind::kRnn;
  ConfigFail("unknown model '" + std::string(name) + "' (expected mlp or rnn)");
}

double RunConfig::EffectiveL2() const {
  if (l2) return *l2;
  return model == ModelKind::kRnn ? 1e-4 : 0.0;
}

int RunConfig::Keep(std::size_t feature_count) const {
  const double k = std::ceil(keep_fraction * static_cast<double>(feature_count) - 1e-9);
  return std::max(1, static_cast<int>(k));
}

void RunConfig::Validate() const {
  if (datasets.empty()) ConfigFail("no dataset given");
  if (synthetic_count < 1) ConfigFail("synthetic_count must be >= 1");
  if (synthetic_tests < 2) ConfigFail("synthetic_tests must be >= 2");
  optimizer.Validate();
  if (mlp_hidden < 1 || rnn_hidden < 1 || rnn_layers < 1) ConfigFail("model sizes must be >= 1");
  if (epochs < 0) ConfigFail("epochs must be >= 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) ConfigFail("bad learning_rate");
  if (l2 && !(*l2 >= 0.0)) ConfigFail("l2 must be >= 0");
  if (batch_size < 0) ConfigFail("batch_size must be >= 0");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) ConfigFail("keep_fraction must be in (0, 1]");
  if (folds < 2) ConfigFail("folds must be >= 2");
  if (threads < 1) ConfigFail("threads must be >= 1");
}

std::string ConfigToJson(const RunConfig& c) {
  Json j;
  j["datasets"] = c.datasets;
  j["test_on"] = c.test_on;
  j["synthetic_count"] = c.synthetic_count;
  j["synthetic_tests"] = c.synthetic_tests;
  j["optimizer"] = OptimizerJson(c.optimizer);
  Json m;
  m["type"] = std::string(ModelName(c.model));
  m["mlp_hidden"] = c.mlp_hidden;
  m["rnn_hidden"] = c.rnn_hidden;
  m["rnn_layers"] = c.rnn_layers;
  m["concat"] = c.concat;
  m["epochs"] = c.epochs;
  m["learning_rate"] = c.learning_rate;
  m["l2"] = c.EffectiveL2();
  m["batch_size"] = c.batch_size;
  m["plain_sgd"] = c.plain_sgd;
  j["model"] = m;
  j["keep_fraction"] = c.keep_fraction;
  j["folds"] = c.folds;
  j["seed"] = c.seed;
  j["wall_clock"] = c.wall_clock;
  j["threads"] = c.threads;
  return j.dump(2) + "\n";
}

RunConfig ConfigFromJson(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    ConfigFail(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    CheckKeys(j, {"datasets", "test_on", "synthetic_count", "synthetic_tests", "optimizer", "model",
                  "keep_fraction", "folds", "seed", "wall_clock", "threads"},
              "config");
    Take(j, "datasets", c.datasets);
    Take(j, "test_on", c.test_on);
    Take(j, "synthetic_count", c.synthetic_count);
    Take(j, "synthetic_tests", c.synthetic_tests);
    if (j.contains("optimizer")) c.optimizer = OptimizerFromJson(j.at("optimizer"));
    if (j.contains("model")) {
      const Json& m = j.at("model");
      CheckKeys(m, {"type", "mlp_hidden", "rnn_hidden", "rnn_layers", "concat", "epochs",
                    "learning_rate", "l2", "batch_size", "plain_sgd"},
                "model");
      if (m.contains("type")) c.model = ParseModel(m.at("type").get<std::string>());
      Take(m, "mlp_hidden", c.mlp_hidden);
      Take(m, "rnn_hidden", c.rnn_hidden);
      Take(m, "rnn_layers", c.rnn_layers);
      Take(m, "concat", c.concat);
      Take(m, "epochs", c.epochs);
      Take(m, "learning_rate", c.learning_rate);
      if (m.contains("l2")) c.l2 = m.at("l2").get<double>();
      Take(m, "batch_size", c.batch_size);
      Take(m, "plain_sgd", c.plain_sgd);
    }
    Take(j, "keep_fraction", c.keep_fraction);
    Take(j, "folds", c.folds);
    Take(j, "seed", c.seed);
    Take(j, "wall_clock", c.wall_clock);
    Take(j, "threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    ConfigFail(std::string("bad config value: ") + e.what());
  }
  return c;
}

std::vector<corpus::FaultDataset> ResolveDatasets(const std::vector<std::string>& specs,
                                                  const RunConfig& config) {
  std::vector<corpus::FaultDataset> out;
  for (const std::string& spec : specs) {
    const fs::path p(spec);
    if (fs::is_directory(p)) {
      corpus::FaultDataset d = corpus::LoadDataset(p);
      if (d.faults.empty()) {
        throw Error(ErrorCode::kNoFaults, kModule,
                    (p / "faults.txt").string() + ": no faulty statement listed");
      }
      out.push_back(std::move(d));
      continue;
    }
    const auto colon = spec.find(':');
    if (colon != std::string::npos && IsTemplate(spec.substr(0, colon))) {
      const auto s = text::ParseNumber<std::uint64_t>(std::string_view(spec).substr(colon + 1));
      if (!s) ConfigFail("bad seed in dataset '" + spec + "'");
      out.push_back(Generate(spec.substr(0, colon), *s, config.synthetic_tests));
      continue;
    }
    if (spec == "suite" || IsTemplate(spec)) {
      const auto names = corpus::TemplateNames();
      for (int i = 0; i < config.synthetic_count; ++i) {
        const std::string& t = spec == "suite" ? names[static_cast<std::size_t>(i) % names.size()] : spec;
        out.push_back(Generate(t, config.seed + static_cast<std::uint64_t>(i), config.synthetic_tests));
      }
      continue;
    }
    throw Error(ErrorCode::kMissingFile, kModule,
                "dataset '" + spec + "' is neither a directory nor a template name");
  }
  std::set<std::string> names;
  for (const auto& d : out) {
    if (!names.insert(d.name).second) ConfigFail("dataset name '" + d.name + "' appears twice");
  }
  return out;
}

std::unique_ptr<neural::Model> MakeModel(const RunConfig& config,
                                         const std::vector<neural::FusedColumn>& fused) {
  if (config.model == ModelKind::kRnn) {
    return std::make_unique<neural::Gru>(neural::SequenceStepSize(fused), config.rnn_hidden,
                                         config.rnn_layers, 3);
  }
  return std::make_unique<neural::Mlp>(config.concat ? fused.size() : 3, config.mlp_hidden);
}

std::vector<double> ModelInput(const neural::Model& model, std::span<const double> row,
                               const std::vector<neural::FusedColumn>& fused, bool concat) {
  if (model.type() == "rnn") return neural::SequenceInput(row, fused);
  return neural::MlpInput(row, fused, concat);
}

std::string ModelToJson(const neural::Model& model, const RunConfig& config, int epoch) {
  Json cfg;
  if (const auto* g = dynamic_cast<const neural::Gru*>(&model)) {
    cfg["step_size"] = g->step_size();
    cfg["hidden"] = g->hidden_size();
    cfg["layers"] = g->layers();
    cfg["steps"] = g->input_size() / g->step_size();
  } else if (const auto* m = dynamic_cast<const neural::Mlp*>(&model)) {
    cfg["inputs"] = m->input_size();
    cfg["hidden"] = m->hidden_size();
    cfg["concat"] = config.concat;
  }
  cfg["learning_rate"] = config.learning_rate;
  cfg["l2"] = config.EffectiveL2();
  cfg["batch_size"] = config.batch_size;
  cfg["optimizer"] = config.plain_sgd ? "sgd" : "adam";
  Json tensors = Json::object();
  const auto& theta = model.parameters();
  for (const auto& t : model.tensors()) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < t.rows; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < t.cols; ++c) row.push_back(theta[t.offset + r * t.cols + c]);
      rows.push_back(std::move(row));
    }
    tensors[t.name] = std::move(rows);
  }
  Json j;
  j["type"] = std::string(model.type());
  j["config"] = cfg;
  j["tensors"] = tensors;
  j["seed"] = config.seed;
  j["epoch"] = epoch;
  return j.dump(2) + "\n";
}

std::unique_ptr<neural::Model> ModelFromJson(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    const std::string type = j.at("type").get<std::string>();
    const Json& cfg = j.at("config");
    std::unique_ptr<neural::Model> model;
    if (type == "rnn") {
      model = std::make_unique<neural::Gru>(cfg.at("step_size").get<std::size_t>(),
                                            cfg.at("hidden").get<std::size_t>(),
                                            cfg.at("layers").get<int>(),
                                            cfg.at("steps").get<std::size_t>());
    } else if (type == "mlp") {
      model = std::make_unique<neural::Mlp>(cfg.at("inputs").get<std::size_t>(),
                                            cfg.at("hidden").get<std::size_t>());
    } else {
      ConfigFail("model.json: unknown type '" + type + "'");
    }
    const Json& tensors = j.at("tensors");
    auto& theta = model->parameters();
    for (const auto& t : model->tensors()) {
      if (!tensors.contains(t.name)) {
        throw Error(ErrorCode::kShapeMismatch, kModule, "model.json: missing tensor " + t.name);
      }
      const Json& rows = tensors.at(t.name);
      if (rows.size() != t.rows) {
        throw Error(ErrorCode::kShapeMismatch, kModule, "model.json: bad shape for " + t.name);
      }
      for (std::size_t r = 0; r < t.rows; ++r) {
        if (rows[r].size() != t.cols) {
          throw Error(ErrorCode::kShapeMismatch, kModule, "model.json: bad shape for " + t.name);
        }
        for (std::size_t c = 0; c < t.cols; ++c) {
          theta[t.offset + r * t.cols + c] = rows[r][c].get<double>();
        }
      }
    }
    if (tensors.size() != model->tensors().size()) {
      throw Error(ErrorCode::kShapeMismatch, kModule, "model.json: unexpected tensors");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidCellValue, kModule, std::string("model.json: ") + e.what());
  }
}

}  // namespace faultfuse::pipeline
