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
#include <mutex>
#include <thread>

#include "faultfuse/error.hpp"
#include "faultfuse/kernels.hpp"
#include "faultfuse/metrics.hpp"
#include "faultfuse/moo.hpp"

namespace faultfuse::moo {
namespace {

constexpr const char* kModule = "moo";

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

Objectives Evaluator::Evaluate(const Bits& bits) { return EvaluateBatch({bits}).front(); }

std::vector<Objectives> Evaluator::EvaluateBatch(const std::vector<Bits>& batch) {
  count_ += static_cast<long>(batch.size());
  std::vector<const Bits*> todo;
  for (const Bits& b : batch) {
    if (!memoize_ || (!cache_.contains(b) && std::none_of(todo.begin(), todo.end(),
                                                           [&](const Bits* t) { return *t == b; }))) {
      todo.push_back(&b);
    }
  }
  distinct_ += static_cast<long>(todo.size());
  std::vector<Objectives> fresh(todo.size());
  const std::size_t workers = std::min<std::size_t>(std::max(threads_, 1), todo.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < todo.size(); ++i) fresh[i] = problem_.Evaluate(*todo[i]);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mu;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < todo.size(); i += workers) fresh[i] = problem_.Evaluate(*todo[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  if (!memoize_) return fresh;
  for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace(*todo[i], fresh[i]);
  std::vector<Objectives> out;
  out.reserve(batch.size());
  for (const Bits& b : batch) out.push_back(cache_.at(b));
  return out;
}

WrapperProblem::WrapperProblem(std::vector<double> x, std::size_t cols, std::vector<int> labels,
                               std::vector<corpus::Fold> folds, std::uint64_t seed, SurrogateConfig config)
    : x_(std::move(x)), cols_(cols), labels_(std::move(labels)), folds_(std::move(folds)), seed_(seed),
      config_(config) {
  if (cols_ == 0 || x_.size() != labels_.size() * cols_) {
    throw Error(ErrorCode::kShapeMismatch, kModule, "feature matrix does not match the label count");
  }
  if (folds_.empty()) throw Error(ErrorCode::kConfigError, kModule, "no folds");
}

std::vector<double> WrapperProblem::FoldAccuracies(const Bits& bits) const {
  if (bits.size() != cols_) throw Error(ErrorCode::kLengthMismatch, kModule, "genome length differs from column count");
  std::vector<std::size_t> selected;
  for (std::size_t c = 0; c < cols_; ++c) {
    if (bits[c]) selected.push_back(c);
  }
  if (selected.empty()) throw Error(ErrorCode::kEmptySelection, kModule, "no feature selected");
  const std::size_t k = selected.size();
  auto row = [&](std::size_t r, std::vector<double>& out) {
    for (std::size_t j = 0; j < k; ++j) out[j] = x_[r * cols_ + selected[j]];
  };

  std::vector<double> accuracies;
  std::vector<double> w(k), xr(k);
  for (std::size_t f = 0; f < folds_.size(); ++f) {
    const corpus::Fold& fold = folds_[f];
    double positives = 0;
    for (std::size_t i : fold.train) positives += labels_[i];
    const double n = static_cast<double>(fold.train.size());
    const double negatives = n - positives;
    const double w_pos = positives > 0 ? n / (2.0 * positives) : 1.0;
    const double w_neg = negatives > 0 ? n / (2.0 * negatives) : 1.0;

    std::fill(w.begin(), w.end(), 0.0);
    double b = 0.0;
    std::vector<std::size_t> order = fold.train;
    Rng rng = Rng::Derive(seed_, {0x5u, f});
    for (int e = 0; e < config_.epochs; ++e) {
      rng.Shuffle(order);
      for (std::size_t i : order) {
        row(i, xr);
        const double p = Sigmoid(kernels::Dot(w, xr) + b);
        const double g = (p - labels_[i]) * (labels_[i] ? w_pos : w_neg) * config_.learning_rate;
        kernels::Axpy(-g, xr, w);
        b -= g;
      }
    }
    std::size_t correct = 0;
    for (std::size_t i : fold.test) {
      row(i, xr);
      const int predicted = Sigmoid(kernels::Dot(w, xr) + b) >= 0.5;
      correct += predicted == labels_[i];
    }
    accuracies.push_back(fold.test.empty() ? 0.0 : static_cast<double>(correct) / fold.test.size());
  }
  return accuracies;
}

Objectives WrapperProblem::Evaluate(const Bits& bits) const {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> acc = FoldAccuracies(bits);
  const metrics::AccuracyStability s = metrics::MeanAndStability(acc);
  double cost = 0.0;
  if (config_.wall_clock) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double instances = static_cast<double>(labels_.size());
    const double t_avg = elapsed / instances;
    cost = t_avg * instances;
  } else {
    cost = static_cast<double>(std::count(bits.begin(), bits.end(), 1)) / static_cast<double>(cols_);
  }
  return {1.0 - s.accuracy, s.stability, cost};
}

}  // namespace faultfuse::moo
