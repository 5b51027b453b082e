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

#include "faultfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "faultfuse/error.hpp"

namespace faultfuse::metrics {
namespace {

constexpr const char* kModule = "metrics";

void CheckLabels(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, kModule, "scores and labels differ in length");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error(ErrorCode::kLabelOutOfRange, kModule, "labels must be 0 or 1");
  }
}

}  // namespace

std::vector<double> Midranks(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<double> ranks(scores.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    // positions i+1 .. j+1
    const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

double MannWhitneyU(std::span<const double> scores, std::span<const int> labels) {
  CheckLabels(scores, labels);
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0 || positives == labels.size()) {
    throw Error(ErrorCode::kSingleClass, kModule, "AUC needs both classes");
  }
  // Descending midranks r map to ascending ranks n + 1 - r.
  const std::vector<double> ranks = Midranks(scores);
  const double n = static_cast<double>(scores.size());
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (labels[i] == 1) rank_sum += n + 1.0 - ranks[i];
  }
  const double p = static_cast<double>(positives);
  return rank_sum - p * (p + 1.0) / 2.0;
}

double AucFromU(double u, std::size_t positives, std::size_t negatives) {
  const double pairs = static_cast<double>(positives) * static_cast<double>(negatives);
  // fl(U/PN) + fl((PN-U)/PN) rounds to exactly 1 for half-integer U (checked
  // exhaustively for P, N < 80), so the plain quotient is antisymmetric.
  return u / pairs;
}

double Auc(std::span<const double> scores, std::span<const int> labels) {
  const double u = MannWhitneyU(scores, labels);
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  return AucFromU(u, positives, labels.size() - positives);
}

FaultRank RankFault(std::span<const double> ranks, std::span<const int> faulty) {
  if (faulty.empty()) throw Error(ErrorCode::kNoFaults, kModule, "no faulty statement");
  FaultRank r;
  r.first = ranks.size() + 1.0;
  double sum = 0.0;
  for (int s : faulty) {
    if (s < 0 || static_cast<std::size_t>(s) >= ranks.size()) {
      throw Error(ErrorCode::kDanglingReference, kModule, "fault id out of range");
    }
    r.first = std::min(r.first, ranks[static_cast<std::size_t>(s)]);
    sum += ranks[static_cast<std::size_t>(s)];
  }
  r.average = sum / static_cast<double>(faulty.size());
  return r;
}

double Localization::LocAcc(int n) const {
  if (faults == 0) return 0.0;
  const std::size_t hits = n <= 1 ? top1 : n <= 3 ? top3 : top5;
  return static_cast<double>(hits) / static_cast<double>(faults);
}

Localization Summarize(std::span<const FaultRank> faults) {
  if (faults.empty()) throw Error(ErrorCode::kNoFaults, kModule, "no faults to summarize");
  Localization out;
  out.faults = faults.size();
  for (const FaultRank& f : faults) {
    out.top1 += f.first <= 1.0;
    out.top3 += f.first <= 3.0;
    out.top5 += f.first <= 5.0;
    out.mfr += f.first;
    out.mar += f.average;
  }
  out.mfr /= static_cast<double>(faults.size());
  out.mar /= static_cast<double>(faults.size());
  return out;
}

AccuracyStability MeanAndStability(std::span<const double> acc) {
  AccuracyStability out;
  if (acc.empty()) return out;
  // Work on offsets from the first fold so equal folds give exactly 0.
  const double n = static_cast<double>(acc.size());
  double shift = 0.0;
  for (double a : acc) shift += a - acc[0];
  shift /= n;
  double var = 0.0;
  for (double a : acc) var += (a - acc[0] - shift) * (a - acc[0] - shift);
  out.accuracy = acc[0] + shift;
  out.stability = std::sqrt(var / n);
  return out;
}

double Confusion::Accuracy() const {
  const std::size_t all = tp + fp + tn + fn;
  return all == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(all);
}

Confusion Confuse(std::span<const double> probabilities, std::span<const int> labels, double threshold) {
  CheckLabels(probabilities, labels);
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = probabilities[i] >= threshold;
    if (labels[i] == 1) {
      (predicted ? c.tp : c.fn) += 1;
    } else {
      (predicted ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

TimeReport TimeAccounting(long evaluations, std::size_t instances, std::optional<double> t_avg_s) {
  TimeReport t;
  t.evaluations = evaluations;
  t.instances = instances;
  t.t_avg_s = t_avg_s;
  if (t_avg_s) t.t_total_s = *t_avg_s * static_cast<double>(instances);
  return t;
}

}  // namespace faultfuse::metrics
