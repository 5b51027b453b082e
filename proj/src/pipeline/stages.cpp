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
#include <cfloat>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "faultfuse/error.hpp"
#include "faultfuse/fusion.hpp"
#include "faultfuse/metrics.hpp"
#include "faultfuse/pipeline.hpp"
#include "faultfuse/random.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace faultfuse::pipeline {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kModule = "pipeline";

// Seed tags for the independent random streams of one run.
enum SeedTag : std::uint64_t {
  kSelectFolds = 1,
  kSurrogate = 2,
  kOptimizer = 3,
  kRankFolds = 4,
  kFoldModel = 6,
  kFinalModel = 7,
};

std::uint64_t SubSeed(std::uint64_t seed, std::uint64_t tag, std::uint64_t extra = 0) {
  return Rng::Derive(seed, {tag, extra}).NextU64();
}

std::string Read(const fs::path& path) {
  auto s = text::ReadFile(path);
  if (!s) throw Error(ErrorCode::kMissingFile, kModule, "cannot read " + path.string());
  return *std::move(s);
}

void WriteAtomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".partial";
  text::WriteFile(tmp, content, kModule);
  fs::rename(tmp, path);
}

Json ParseJson(const fs::path& path) {
  try {
    return Json::parse(Read(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidCellValue, kModule, path.string() + ": " + e.what());
  }
}

// Every statement of every dataset, rows stacked in dataset order.
struct Pool {
  std::vector<features::Column> columns;
  std::vector<double> x;
  std::vector<int> labels;
  std::vector<std::size_t> start;  // first row of each dataset, plus the total

  std::size_t rows() const { return labels.size(); }
  std::span<const double> row(std::size_t r) const {
    return {x.data() + r * columns.size(), columns.size()};
  }
};

features::FeatureMatrix LoadFeatures(const RunConfig& config, const corpus::FaultDataset& d) {
  const fs::path path = config.output / d.name / "features.csv";
  features::FeatureMatrix m = features::FromCsv(Read(path));
  if (m.rows != d.statement_count()) {
    throw Error(ErrorCode::kDimensionMismatch, kModule,
                path.string() + ": row count differs from the dataset's statements");
  }
  return m;
}

Pool MakePool(const RunConfig& config, const std::vector<corpus::FaultDataset>& datasets) {
  Pool p;
  for (const auto& d : datasets) {
    features::FeatureMatrix m = LoadFeatures(config, d);
    if (p.start.empty()) {
      p.columns = m.columns;
    } else if (m.columns != p.columns) {
      throw Error(ErrorCode::kDimensionMismatch, kModule, d.name + ": feature columns differ");
    }
    p.start.push_back(p.labels.size());
    p.x.insert(p.x.end(), m.values.begin(), m.values.end());
    for (std::size_t s = 0; s < d.statement_count(); ++s) {
      p.labels.push_back(d.is_fault(static_cast<int>(s)) ? 1 : 0);
    }
  }
  p.start.push_back(p.labels.size());
  return p;
}

std::vector<neural::FusedColumn> LoadFused(const RunConfig& config,
                                           const std::vector<features::Column>& columns) {
  const fs::path path = config.output / "fused.json";
  const Json j = ParseJson(path);
  std::vector<neural::FusedColumn> out;
  try {
    for (const auto& e : j) {
      const std::string label = e.at("feature").get<std::string>();
      const auto it = std::find_if(columns.begin(), columns.end(),
                                   [&](const features::Column& c) { return c.Label() == label; });
      if (it == columns.end()) {
        throw Error(ErrorCode::kDanglingReference, kModule,
                    path.string() + ": unknown feature " + label);
      }
      out.push_back({static_cast<std::size_t>(it - columns.begin()), it->family,
                     e.at("weight").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidCellValue, kModule, path.string() + ": " + e.what());
  }
  if (out.empty()) throw Error(ErrorCode::kEmptySelection, kModule, path.string() + ": empty");
  return out;
}

std::vector<std::vector<double>> Instances(const neural::Model& model, const Pool& pool,
                                           const std::vector<neural::FusedColumn>& fused,
                                           bool concat, std::span<const std::size_t> rows) {
  std::vector<std::vector<double>> xs;
  xs.reserve(rows.size());
  for (std::size_t r : rows) xs.push_back(ModelInput(model, pool.row(r), fused, concat));
  return xs;
}

std::vector<std::size_t> AllRows(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Fresh model, prior-matched output bias, trained on the given rows.
std::unique_ptr<neural::Model> Fit(const RunConfig& config, const Pool& pool,
                                   const std::vector<neural::FusedColumn>& fused,
                                   std::span<const std::size_t> rows, std::uint64_t seed,
                                   std::vector<neural::LossPoint>* losses) {
  auto model = MakeModel(config, fused);
  model->InitializeWeights(seed);
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (std::size_t r : rows) labels.push_back(pool.labels[r]);
  const double positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double prior = labels.empty() ? 0.5 : positives / static_cast<double>(labels.size());
  if (prior > 0.0 && prior < 1.0) model->SetOutputBias(std::log(prior / (1.0 - prior)));
  neural::TrainConfig tc;
  tc.epochs = config.epochs;
  tc.learning_rate = config.learning_rate;
  tc.l2 = config.EffectiveL2();
  tc.batch_size = config.batch_size;
  tc.plain_sgd = config.plain_sgd;
  tc.seed = seed;
  auto points = neural::Train(*model, Instances(*model, pool, fused, config.concat, rows), labels, tc);
  if (losses) *losses = std::move(points);
  return model;
}

std::vector<std::string> EvaluatedSpecs(const RunConfig& config) {
  return config.test_on.empty() ? config.datasets : config.test_on;
}

Json Num(double v) {
  // JSON has no infinity; the largest finite double stands in for it.
  if (std::isinf(v)) return v > 0 ? DBL_MAX : -DBL_MAX;
  return v;
}

struct Scored {
  std::vector<double> scores;
  std::vector<int> folds;
};

Scored ReadScores(const RunConfig& config, const corpus::FaultDataset& d) {
  const fs::path path = config.output / d.name / "scores.csv";
  const std::string content = Read(path);
  const auto lines = text::Lines(content);
  if (lines.empty() || lines[0] != "statement_id,score,fold") {
    throw Error(ErrorCode::kDimensionMismatch, kModule, path.string() + ": bad header");
  }
  Scored s;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto cells = text::Split(lines[l], ',');
    const auto id = cells.size() == 3 ? text::ParseNumber<long>(cells[0]) : std::nullopt;
    const auto score = cells.size() == 3 ? text::ParseNumber<double>(cells[1]) : std::nullopt;
    const auto fold = cells.size() == 3 ? text::ParseNumber<int>(cells[2]) : std::nullopt;
    if (!id || !score || !fold || *id != static_cast<long>(l - 1)) {
      throw Error(ErrorCode::kInvalidCellValue, kModule,
                  path.string() + ": bad row " + std::to_string(l + 1));
    }
    s.scores.push_back(*score);
    s.folds.push_back(*fold);
  }
  if (s.scores.size() != d.statement_count()) {
    throw Error(ErrorCode::kDimensionMismatch, kModule,
                path.string() + ": row count differs from the dataset's statements");
  }
  return s;
}

struct DatasetRow {
  std::string dataset;
  metrics::FaultRank rank;
  std::optional<double> auc;
  std::vector<double> scores;
  std::vector<double> ranks;
};

DatasetRow ScoreRow(const corpus::FaultDataset& d, std::vector<double> scores) {
  DatasetRow row;
  row.dataset = d.name;
  row.ranks = metrics::Midranks(scores);
  row.rank = metrics::RankFault(row.ranks, d.faults);
  std::vector<int> labels(d.statement_count());
  for (std::size_t s = 0; s < labels.size(); ++s) labels[s] = d.is_fault(static_cast<int>(s));
  if (d.faults.size() < labels.size()) row.auc = metrics::Auc(scores, labels);
  row.scores = std::move(scores);
  return row;
}

struct RankerReport {
  std::string name;
  std::vector<DatasetRow> rows;
  metrics::Localization summary;
  std::optional<double> auc;  // mean over datasets where defined
  long evaluations = 0;
};

RankerReport Summarize(std::string name, std::vector<DatasetRow> rows, long evaluations) {
  RankerReport r;
  r.name = std::move(name);
  r.evaluations = evaluations;
  std::vector<metrics::FaultRank> ranks;
  double auc_sum = 0.0;
  int auc_n = 0;
  for (const auto& row : rows) {
    ranks.push_back(row.rank);
    if (row.auc) {
      auc_sum += *row.auc;
      ++auc_n;
    }
  }
  r.summary = metrics::Summarize(ranks);
  if (auc_n > 0) r.auc = auc_sum / auc_n;
  r.rows = std::move(rows);
  return r;
}

std::string Cell(std::optional<double> v) { return v ? text::FormatDouble(*v) : "NA"; }

}  // namespace

void Extract(const RunConfig& config) {
  config.Validate();
  auto datasets = ResolveDatasets(config.datasets, config);
  auto extra = ResolveDatasets(config.test_on, config);
  for (auto& d : extra) datasets.push_back(std::move(d));
  for (const auto& d : datasets) {
    WriteAtomic(config.output / d.name / "features.csv",
                features::ToCsv(features::AssembleFeatures(d)));
  }
}

void Select(const RunConfig& config) {
  config.Validate();
  const auto datasets = ResolveDatasets(config.datasets, config);
  const Pool pool = MakePool(config, datasets);
  const int k = static_cast<int>(std::min<std::size_t>(config.folds, pool.rows()));
  auto folds = corpus::SplitFolds(pool.labels, k, SubSeed(config.seed, kSelectFolds));
  moo::SurrogateConfig sc;
  sc.wall_clock = config.wall_clock;
  const moo::WrapperProblem problem(pool.x, pool.columns.size(), pool.labels, std::move(folds),
                                    SubSeed(config.seed, kSurrogate), sc);
  moo::OptimizerConfig oc = config.optimizer;
  oc.seed = SubSeed(config.seed, kOptimizer);
  oc.threads = config.threads;
  // Timed objectives are measured per request, never replayed from a cache.
  oc.memoize = !config.wall_clock;
  const moo::RunResult result = moo::MakeOptimizer(problem, oc)->Run();

  Json pareto = Json::array();
  for (const auto& ind : result.archive) {
    Json e;
    e["bits"] = moo::BitString(ind.bits);
    e["objectives"] = {Num(ind.objectives[0]), Num(ind.objectives[1]), Num(ind.objectives[2])};
    e["crowding"] = Num(ind.crowding);
    pareto.push_back(std::move(e));
  }
  Json evals;
  evals["optimizer"] = result.optimizer;
  evals["evaluation_count"] = result.evaluations;
  evals["distinct_evaluations"] = result.distinct_evaluations;
  evals["generations"] = result.generations;
  evals["instances"] = pool.rows();
  if (config.wall_clock) evals["wall_clock_s"] = result.wall_clock_s;
  WriteAtomic(config.output / "pareto.json", pareto.dump(2) + "\n");
  WriteAtomic(config.output / "evals.json", evals.dump(2) + "\n");
}

void FuseStage(const RunConfig& config) {
  config.Validate();
  const auto datasets = ResolveDatasets(config.datasets, config);
  const auto columns = LoadFeatures(config, datasets.front()).columns;
  const fs::path path = config.output / "pareto.json";
  const Json j = ParseJson(path);
  std::vector<moo::Individual> archive;
  try {
    for (const auto& e : j) {
      moo::Individual ind;
      ind.bits = moo::ParseBits(e.at("bits").get<std::string>());
      if (ind.bits.size() != columns.size()) {
        throw Error(ErrorCode::kDimensionMismatch, kModule,
                    path.string() + ": genome length differs from the feature count");
      }
      const auto& o = e.at("objectives");
      for (std::size_t m = 0; m < 3; ++m) ind.objectives[m] = o.at(m).get<double>();
      archive.push_back(std::move(ind));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidCellValue, kModule, path.string() + ": " + e.what());
  }
  const fusion::FusedSet fused = fusion::Fuse(archive, config.Keep(columns.size()));
  Json out = Json::array();
  for (const auto& f : fused) {
    const auto& c = columns[static_cast<std::size_t>(f.feature)];
    Json e;
    e["feature"] = c.Label();
    e["family"] = std::string(features::FamilyName(c.family));
    e["weight"] = f.weight;
    out.push_back(std::move(e));
  }
  WriteAtomic(config.output / "fused.json", out.dump(2) + "\n");
}

void TrainStage(const RunConfig& config) {
  config.Validate();
  const auto datasets = ResolveDatasets(config.datasets, config);
  const Pool pool = MakePool(config, datasets);
  const auto fused = LoadFused(config, pool.columns);
  std::vector<neural::LossPoint> losses;
  const auto rows = AllRows(pool.rows());
  const auto model = Fit(config, pool, fused, rows, SubSeed(config.seed, kFinalModel), &losses);
  std::string csv = "epoch,loss\n";
  for (const auto& p : losses) csv += std::to_string(p.epoch) + "," + text::FormatDouble(p.loss) + "\n";
  WriteAtomic(config.output / "model.json", ModelToJson(*model, config, config.epochs));
  WriteAtomic(config.output / "loss.csv", csv);
}

void Rank(const RunConfig& config) {
  config.Validate();
  std::vector<corpus::FaultDataset> datasets;
  std::vector<double> scores;
  std::vector<int> fold_of;
  if (config.test_on.empty()) {
    // Out-of-fold scores: every statement is scored by a model that never
    // saw its label.
    datasets = ResolveDatasets(config.datasets, config);
    const Pool pool = MakePool(config, datasets);
    const auto fused = LoadFused(config, pool.columns);
    const int k = static_cast<int>(std::min<std::size_t>(config.folds, pool.rows()));
    const auto folds = corpus::SplitFolds(pool.labels, k, SubSeed(config.seed, kRankFolds));
    scores.assign(pool.rows(), 0.0);
    fold_of.assign(pool.rows(), 0);
    auto score_fold = [&](std::size_t f) {
      const auto model = Fit(config, pool, fused, folds[f].train,
                             SubSeed(config.seed, kFoldModel, f), nullptr);
      const auto xs = Instances(*model, pool, fused, config.concat, folds[f].test);
      const auto s = neural::ScoreStatements(model.get(), xs);
      for (std::size_t i = 0; i < folds[f].test.size(); ++i) {
        scores[folds[f].test[i]] = s[i];
        fold_of[folds[f].test[i]] = static_cast<int>(f);
      }
    };
    const std::size_t workers = std::min<std::size_t>(config.threads, folds.size());
    if (workers <= 1) {
      for (std::size_t f = 0; f < folds.size(); ++f) score_fold(f);
    } else {
      std::vector<std::future<void>> jobs;
      std::size_t next = 0;
      std::mutex mu;
      for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&] {
          while (true) {
            std::size_t f;
            {
              std::lock_guard<std::mutex> lock(mu);
              if (next >= folds.size()) return;
              f = next++;
            }
            score_fold(f);
          }
        }));
      }
      for (auto& j : jobs) j.get();
    }
    for (std::size_t i = 0; i + 1 < pool.start.size(); ++i) {
      const auto& d = datasets[i];
      std::string csv = "statement_id,score,fold\n";
      for (std::size_t s = 0; s < d.statement_count(); ++s) {
        const std::size_t r = pool.start[i] + s;
        csv += std::to_string(s) + "," + text::FormatDouble(scores[r]) + "," +
               std::to_string(fold_of[r]) + "\n";
      }
      WriteAtomic(config.output / d.name / "scores.csv", csv);
    }
    return;
  }
  const auto model = ModelFromJson(Read(config.output / "model.json"));
  datasets = ResolveDatasets(config.test_on, config);
  for (const auto& d : datasets) {
    const Pool pool = MakePool(config, {d});
    const auto fused = LoadFused(config, pool.columns);
    if (model->input_size() != ModelInput(*model, pool.row(0), fused, config.concat).size()) {
      throw Error(ErrorCode::kShapeMismatch, kModule, "model.json does not fit fused.json");
    }
    const auto xs = Instances(*model, pool, fused, config.concat, AllRows(pool.rows()));
    const auto s = neural::ScoreStatements(model.get(), xs);
    std::string csv = "statement_id,score,fold\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
      csv += std::to_string(i) + "," + text::FormatDouble(s[i]) + ",0\n";
    }
    WriteAtomic(config.output / d.name / "scores.csv", csv);
  }
}

void Evaluate(const RunConfig& config) {
  config.Validate();
  const auto datasets = ResolveDatasets(EvaluatedSpecs(config), config);
  const Json evals = ParseJson(config.output / "evals.json");
  long evaluations = 0;
  std::size_t train_instances = 0;
  std::optional<double> wall;
  try {
    evaluations = evals.at("evaluation_count").get<long>();
    train_instances = evals.at("instances").get<std::size_t>();
    if (evals.contains("wall_clock_s")) wall = evals.at("wall_clock_s").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidCellValue, kModule, std::string("evals.json: ") + e.what());
  }

  std::vector<DatasetRow> model_rows, tarantula_rows, dstar_rows;
  std::vector<double> probs;
  std::vector<int> labels;
  std::map<int, metrics::Confusion> per_fold;
  for (const auto& d : datasets) {
    Scored s = ReadScores(config, d);
    for (std::size_t i = 0; i < s.scores.size(); ++i) {
      const int y = d.is_fault(static_cast<int>(i)) ? 1 : 0;
      probs.push_back(s.scores[i]);
      labels.push_back(y);
      const auto c = metrics::Confuse(std::span(&s.scores[i], 1), std::span(&y, 1));
      auto& acc = per_fold[s.folds[i]];
      acc.tp += c.tp;
      acc.fp += c.fp;
      acc.tn += c.tn;
      acc.fn += c.fn;
    }
    model_rows.push_back(ScoreRow(d, std::move(s.scores)));
    tarantula_rows.push_back(ScoreRow(d, features::BaselineScores(d, features::Baseline::kTarantula)));
    dstar_rows.push_back(ScoreRow(d, features::BaselineScores(d, features::Baseline::kDStar)));
  }
  std::vector<RankerReport> rankers;
  rankers.push_back(Summarize(std::string(ModelName(config.model)), std::move(model_rows), evaluations));
  rankers.push_back(Summarize("tarantula", std::move(tarantula_rows), 0));
  rankers.push_back(Summarize("dstar", std::move(dstar_rows), 0));

  const metrics::Confusion confusion = metrics::Confuse(probs, labels);
  std::vector<double> fold_acc;
  for (const auto& [f, c] : per_fold) fold_acc.push_back(c.Accuracy());
  const metrics::AccuracyStability as = metrics::MeanAndStability(fold_acc);
  std::optional<double> t_avg;
  if (wall && evaluations > 0) t_avg = *wall / static_cast<double>(evaluations);
  const metrics::TimeReport time = metrics::TimeAccounting(evaluations, train_instances, t_avg);

  Json report;
  report["optimizer"] = std::string(moo::AlgorithmName(config.optimizer.algorithm));
  report["model"] = std::string(ModelName(config.model));
  report["seed"] = config.seed;
  report["mode"] = config.test_on.empty() ? "cross-validation" : "cross-dataset";
  Json clf;
  clf["clf_acc"] = confusion.Accuracy();
  clf["stability"] = as.stability;
  clf["fold_accuracies"] = fold_acc;
  clf["confusion"] = {{"tp", confusion.tp}, {"fp", confusion.fp}, {"tn", confusion.tn},
                      {"fn", confusion.fn}};
  report["classifier"] = clf;
  Json tj;
  tj["evaluations"] = time.evaluations;
  tj["instances"] = time.instances;
  if (time.t_avg_s) tj["t_avg_s"] = *time.t_avg_s;
  if (time.t_total_s) tj["t_total_s"] = *time.t_total_s;
  report["time"] = tj;
  Json rj = Json::array();
  std::string tsv = "model\tdataset\ttop1\ttop3\ttop5\tmar\tmfr\tauc\tevaluations\n";
  for (const auto& r : rankers) {
    Json entry;
    entry["name"] = r.name;
    Json sum;
    sum["faults"] = r.summary.faults;
    sum["top1"] = r.summary.top1;
    sum["top3"] = r.summary.top3;
    sum["top5"] = r.summary.top5;
    sum["loc_acc@1"] = r.summary.LocAcc(1);
    sum["loc_acc@3"] = r.summary.LocAcc(3);
    sum["loc_acc@5"] = r.summary.LocAcc(5);
    sum["mar"] = r.summary.mar;
    sum["mfr"] = r.summary.mfr;
    sum["auc"] = r.auc ? Json(*r.auc) : Json(nullptr);
    sum["evaluations"] = r.evaluations;
    entry["summary"] = sum;
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const auto& row = r.rows[i];
      const auto& d = datasets[i];
      Json rowj;
      rowj["dataset"] = row.dataset;
      rowj["faults"] = d.faults;
      rowj["first_rank"] = row.rank.first;
      rowj["average_rank"] = row.rank.average;
      rowj["top1"] = row.rank.first <= 1 ? 1 : 0;
      rowj["top3"] = row.rank.first <= 3 ? 1 : 0;
      rowj["top5"] = row.rank.first <= 5 ? 1 : 0;
      rowj["auc"] = row.auc ? Json(*row.auc) : Json(nullptr);
      rowj["scores"] = row.scores;
      rowj["ranks"] = row.ranks;
      rows.push_back(std::move(rowj));
      tsv += r.name + "\t" + row.dataset + "\t" + std::to_string(row.rank.first <= 1) + "\t" +
             std::to_string(row.rank.first <= 3) + "\t" + std::to_string(row.rank.first <= 5) +
             "\t" + text::FormatDouble(row.rank.average) + "\t" +
             text::FormatDouble(row.rank.first) + "\t" + Cell(row.auc) + "\t" +
             std::to_string(r.evaluations) + "\n";
    }
    entry["datasets"] = rows;
    rj.push_back(std::move(entry));
    tsv += r.name + "\tALL\t" + std::to_string(r.summary.top1) + "\t" +
           std::to_string(r.summary.top3) + "\t" + std::to_string(r.summary.top5) + "\t" +
           text::FormatDouble(r.summary.mar) + "\t" + text::FormatDouble(r.summary.mfr) + "\t" +
           Cell(r.auc) + "\t" + std::to_string(r.evaluations) + "\n";
  }
  report["rankers"] = rj;
  WriteAtomic(config.output / "report.json", report.dump(2) + "\n");
  WriteAtomic(config.output / "report.tsv", tsv);
}

void Run(const RunConfig& config) {
  config.Validate();
  if (config.output.empty()) {
    throw Error(ErrorCode::kConfigError, kModule, "no output directory given");
  }
  const fs::path target = fs::absolute(config.output).lexically_normal();
  const fs::path name = target.has_filename() ? target.filename() : target.parent_path().filename();
  const fs::path base = target.has_filename() ? target : target.parent_path();
  const fs::path staging = base.parent_path() / ("." + name.string() + ".partial");
  fs::remove_all(staging);
  fs::create_directories(staging);
  try {
    RunConfig c = config;
    c.output = staging;
    text::WriteFile(staging / "resolved-config.json", ConfigToJson(config), kModule);
    Extract(c);
    Select(c);
    FuseStage(c);
    TrainStage(c);
    Rank(c);
    Evaluate(c);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  fs::remove_all(base);
  fs::rename(staging, base);
}

void Matrix(const RunConfig& config, const std::vector<moo::OptimizerConfig>& optimizers,
            const std::vector<ModelKind>& models) {
  if (config.output.empty()) {
    throw Error(ErrorCode::kConfigError, kModule, "no output directory given");
  }
  if (optimizers.empty() || models.empty()) {
    throw Error(ErrorCode::kConfigError, kModule, "matrix needs at least one optimizer and model");
  }
  std::vector<RunConfig> cells;
  for (const auto& o : optimizers) {
    for (ModelKind m : models) {
      RunConfig c = config;
      c.optimizer = o;
      c.model = m;
      c.output = config.output / (std::string(moo::AlgorithmName(o.algorithm)) + "-" +
                                  std::string(ModelName(m)));
      c.threads = 1;
      c.Validate();
      cells.push_back(std::move(c));
    }
  }
  std::vector<std::exception_ptr> errors(cells.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= cells.size()) return;
        i = next++;
      }
      try {
        Run(cells[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(config.threads, 1), cells.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::string tsv = "optimizer\tmodel\tdataset\ttop1\ttop3\ttop5\tmar\tmfr\tauc\tevaluations\n";
  for (const auto& c : cells) {
    const std::string content = Read(c.output / "report.tsv");
    const auto lines = text::Lines(content);
    for (std::size_t l = 1; l < lines.size(); ++l) {
      tsv += std::string(moo::AlgorithmName(c.optimizer.algorithm)) + "\t" + std::string(lines[l]) + "\n";
    }
  }
  WriteAtomic(config.output / "matrix.tsv", tsv);
}

}  // namespace faultfuse::pipeline
