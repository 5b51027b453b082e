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

#ifndef FAULTFUSE_METRICS_HPP_
#define FAULTFUSE_METRICS_HPP_

// Ranking and classification metrics: midranks, Top-N / MFR / MAR, AUC,
// accuracy and stability, confusion counts and time accounting.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace faultfuse::metrics {

// Rank 1 = highest score; tied scores share the mean of their positions.
std::vector<double> Midranks(std::span<const double> scores);

// Mann-Whitney U of the positives against the negatives: pairs where the
// positive scores higher, ties counting one half. Errors: kSingleClass,
// kLabelOutOfRange.
double MannWhitneyU(std::span<const double> scores, std::span<const int> labels);

// U / (P * N), evaluated so that Auc(s, y) + Auc(s, 1 - y) == 1 exactly.
double AucFromU(double u, std::size_t positives, std::size_t negatives);
double Auc(std::span<const double> scores, std::span<const int> labels);

struct FaultRank {
  double first = 0.0;    // best (smallest) rank among the faulty statements
  double average = 0.0;  // mean rank of the faulty statements
};

// Errors: kNoFaults, kDanglingReference (fault id out of range).
FaultRank RankFault(std::span<const double> ranks, std::span<const int> faulty_statements);

struct Localization {
  std::size_t faults = 0;
  std::size_t top1 = 0, top3 = 0, top5 = 0;
  double mfr = 0.0;
  double mar = 0.0;

  // Top-N / faults.
  double LocAcc(int n) const;
};

// Errors: kNoFaults on an empty list.
Localization Summarize(std::span<const FaultRank> faults);

struct AccuracyStability {
  double accuracy = 0.0;
  double stability = 0.0;  // population standard deviation
};

AccuracyStability MeanAndStability(std::span<const double> fold_accuracies);

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  // (TP + TN) / all instances; 0 when empty.
  double Accuracy() const;
};

// Predicted positive when probability >= threshold. Errors: kLengthMismatch,
// kLabelOutOfRange.
Confusion Confuse(std::span<const double> probabilities, std::span<const int> labels,
                  double threshold = 0.5);

struct TimeReport {
  long evaluations = 0;
  std::optional<double> t_avg_s;
  std::size_t instances = 0;
  std::optional<double> t_total_s;  // t_avg * instances, wall-clock mode only
};

TimeReport TimeAccounting(long evaluations, std::size_t instances,
                          std::optional<double> t_avg_s = std::nullopt);

}  // namespace faultfuse::metrics

#endif  // FAULTFUSE_METRICS_HPP_
