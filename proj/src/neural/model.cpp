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
#include <numeric>

#include "faultfuse/error.hpp"
#include "faultfuse/kernels.hpp"
#include "faultfuse/neural.hpp"
#include "faultfuse/random.hpp"

namespace faultfuse::neural {
namespace {

constexpr const char* kModule = "neural";

void CheckLabels(std::span<const int> labels) {
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error(ErrorCode::kLabelOutOfRange, kModule, "labels must be 0 or 1");
  }
}

bool IsWeightMatrix(const std::string& name) {
  const auto dot = name.rfind('.');
  const char first = name[dot == std::string::npos ? 0 : dot + 1];
  return first == 'W' || first == 'U';
}

}  // namespace

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Bce(double p, int y) {
  const double q = std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
  return y == 1 ? -std::log(q) : -std::log(1.0 - q);
}

double BceLoss(std::span<const double> predictions, std::span<const int> labels, double l2,
               std::span<const double> params) {
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, kModule, "predictions and labels differ in length");
  }
  CheckLabels(labels);
  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) loss += Bce(predictions[i], labels[i]);
  if (!labels.empty()) loss /= static_cast<double>(labels.size());
  if (l2 != 0.0) {
    double sq = 0.0;
    for (double t : params) sq += t * t;
    loss += l2 * sq;
  }
  return loss;
}

double Model::LogitGradient(double logit, int y) {
  const double p = Sigmoid(logit);
  if (p < kProbEpsilon || p > 1.0 - kProbEpsilon) return 0.0;
  return p - y;
}

double Model::Predict(std::span<const double> x) const {
  if (x.size() != input_size()) throw Error(ErrorCode::kShapeMismatch, kModule, "instance has the wrong length");
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteInput, kModule, "non-finite input");
  }
  return Sigmoid(Logit(x));
}

double Model::Loss(const std::vector<std::vector<double>>& xs, std::span<const int> labels, double l2,
                   std::vector<double>* grad) const {
  if (xs.size() != labels.size()) throw Error(ErrorCode::kLengthMismatch, kModule, "instances and labels differ");
  CheckLabels(labels);
  if (grad) grad->assign(theta_.size(), 0.0);
  const double scale = xs.empty() ? 0.0 : 1.0 / static_cast<double>(xs.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != input_size()) throw Error(ErrorCode::kShapeMismatch, kModule, "instance has the wrong length");
    const double logit = grad ? ForwardBackward(xs[i], labels[i], scale, *grad) : Logit(xs[i]);
    loss += Bce(Sigmoid(logit), labels[i]);
  }
  loss *= scale;
  if (l2 != 0.0) {
    double sq = 0.0;
    for (std::size_t k = 0; k < theta_.size(); ++k) {
      sq += theta_[k] * theta_[k];
      if (grad) (*grad)[k] += 2.0 * l2 * theta_[k];
    }
    loss += l2 * sq;
  }
  return loss;
}

const TensorInfo& Model::tensor(std::string_view name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return t;
  }
  throw Error(ErrorCode::kShapeMismatch, kModule, "no tensor named " + std::string(name));
}

std::span<double> Model::view(std::string_view name) {
  const TensorInfo& t = tensor(name);
  return std::span<double>(theta_).subspan(t.offset, t.size());
}

std::span<const double> Model::view(std::string_view name) const {
  const TensorInfo& t = tensor(name);
  return std::span<const double>(theta_).subspan(t.offset, t.size());
}

void Model::SetOutputBias(double b) { view("b_out")[0] = b; }

void Model::InitializeWeights(std::uint64_t seed) {
  Rng rng = Rng::Derive(seed, {0x1a17});
  std::fill(theta_.begin(), theta_.end(), 0.0);
  for (const TensorInfo& t : tensors_) {
    if (!IsWeightMatrix(t.name)) continue;
    const double bound = std::sqrt(6.0 / static_cast<double>(t.rows + t.cols));
    for (std::size_t k = 0; k < t.size(); ++k) theta_[t.offset + k] = rng.Uniform(-bound, bound);
  }
}

std::size_t Model::AddTensor(std::string name, std::size_t rows, std::size_t cols) {
  tensors_.push_back({std::move(name), rows, cols, total_});
  total_ += rows * cols;
  return tensors_.back().offset;
}

// --------------------------------------------------------------------- MLP

Mlp::Mlp(std::size_t inputs, std::size_t hidden) : inputs_(inputs), hidden_(hidden) {
  if (inputs == 0 || hidden == 0) throw Error(ErrorCode::kShapeMismatch, kModule, "empty MLP layer");
  AddTensor("W", hidden, inputs);
  AddTensor("b", hidden, 1);
  AddTensor("w_out", 1, hidden);
  AddTensor("b_out", 1, 1);
  Finalize();
}

std::vector<double> Mlp::Hidden(std::span<const double> x) const {
  const auto b = view("b");
  std::vector<double> h(b.begin(), b.end());
  kernels::Gemv(view("W"), hidden_, inputs_, x, h);
  for (double& v : h) v = Sigmoid(v);
  return h;
}

double Mlp::Logit(std::span<const double> x) const {
  const std::vector<double> h = Hidden(x);
  return kernels::Dot(view("w_out"), h) + view("b_out")[0];
}

double Mlp::ForwardBackward(std::span<const double> x, int y, double scale, std::span<double> grad) const {
  const std::vector<double> h = Hidden(x);
  const auto w_out = view("w_out");
  const double logit = kernels::Dot(w_out, h) + view("b_out")[0];
  const double d = scale * LogitGradient(logit, y);
  if (d == 0.0) return logit;
  auto g = [&](const char* name) {
    const TensorInfo& t = tensor(name);
    return grad.subspan(t.offset, t.size());
  };
  kernels::Axpy(d, h, g("w_out"));
  g("b_out")[0] += d;
  std::vector<double> da(hidden_);
  for (std::size_t i = 0; i < hidden_; ++i) da[i] = d * w_out[i] * h[i] * (1.0 - h[i]);
  kernels::Ger(1.0, da, x, g("W"));
  kernels::Axpy(1.0, da, g("b"));
  return logit;
}

// ------------------------------------------------------------------ inputs

std::vector<double> MlpInput(std::span<const double> row, const std::vector<FusedColumn>& fused, bool concat) {
  if (concat) {
    std::vector<double> out;
    for (const auto& f : fused) out.push_back(row[f.column] * f.weight);
    return out;
  }
  std::vector<double> out(3, 0.0);
  for (features::Family fam : features::kFamilies) {
    double num = 0.0, den = 0.0;
    for (const auto& f : fused) {
      if (f.family != fam) continue;
      num += f.weight * row[f.column];
      den += f.weight;
    }
    out[static_cast<std::size_t>(fam)] = den > 0.0 ? num / den : 0.0;
  }
  return out;
}

std::size_t SequenceStepSize(const std::vector<FusedColumn>& fused) {
  std::size_t n = 1;
  for (features::Family fam : features::kFamilies) {
    const auto c = static_cast<std::size_t>(
        std::count_if(fused.begin(), fused.end(), [&](const FusedColumn& f) { return f.family == fam; }));
    n = std::max(n, c);
  }
  return n;
}

std::vector<double> SequenceInput(std::span<const double> row, const std::vector<FusedColumn>& fused) {
  const std::size_t n = SequenceStepSize(fused);
  std::vector<double> out;
  out.reserve(3 * n);
  for (features::Family fam : features::kFamilies) {
    std::vector<double> step;
    for (const auto& f : fused) {
      if (f.family == fam) step.push_back(row[f.column] * f.weight);
    }
    const double mean =
        step.empty() ? 0.0 : std::accumulate(step.begin(), step.end(), 0.0) / static_cast<double>(step.size());
    step.resize(n, mean);
    out.insert(out.end(), step.begin(), step.end());
  }
  return out;
}

// ---------------------------------------------------------------- training

std::vector<LossPoint> Train(Model& model, const std::vector<std::vector<double>>& xs, std::span<const int> labels,
                             const TrainConfig& config) {
  if (xs.size() != labels.size()) throw Error(ErrorCode::kLengthMismatch, kModule, "instances and labels differ");
  CheckLabels(labels);
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == static_cast<long>(labels.size())) {
    throw Error(ErrorCode::kDegenerateLabels, kModule, "training set needs both classes");
  }
  for (const auto& x : xs) {
    if (x.size() != model.input_size()) throw Error(ErrorCode::kShapeMismatch, kModule, "instance has the wrong length");
  }
  if (config.epochs < 0 || config.batch_size < 0 || config.record_every <= 0) {
    throw Error(ErrorCode::kConfigError, kModule, "bad training schedule");
  }

  std::vector<double>& theta = model.parameters();
  std::vector<double> m(theta.size(), 0.0), v(theta.size(), 0.0), grad;
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = config.batch_size == 0 ? xs.size() : static_cast<std::size_t>(config.batch_size);
  std::vector<LossPoint> curve;
  long step = 0;
  std::vector<std::vector<double>> bx;
  std::vector<int> by;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng rng = Rng::Derive(config.seed, {static_cast<std::uint64_t>(epoch)});
    rng.Shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      bx.clear();
      by.clear();
      for (std::size_t k = start; k < end; ++k) {
        bx.push_back(xs[order[k]]);
        by.push_back(labels[order[k]]);
      }
      model.Loss(bx, by, config.l2, &grad);
      ++step;
      if (config.plain_sgd) {
        for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= config.learning_rate * grad[k];
        continue;
      }
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      for (std::size_t k = 0; k < theta.size(); ++k) {
        m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * grad[k];
        v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * grad[k] * grad[k];
        theta[k] -= config.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + config.adam_epsilon);
      }
    }
    if (epoch % config.record_every == 0) curve.push_back({epoch, model.Loss(xs, labels, config.l2, nullptr)});
  }
  return curve;
}

std::vector<double> ScoreStatements(const Model* model, const std::vector<std::vector<double>>& xs) {
  if (model == nullptr || model->parameters().empty()) {
    throw Error(ErrorCode::kUntrainedModel, kModule, "no model to score with");
  }
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(model->Predict(x));
  return out;
}

}  // namespace faultfuse::neural
