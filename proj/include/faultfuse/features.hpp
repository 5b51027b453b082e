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

#ifndef FAULTFUSE_FEATURES_HPP_
#define FAULTFUSE_FEATURES_HPP_

// Per-statement feature extraction: spectrum (SBFL), mutation (MBFL) and
// text (TBFL) families, assembled into one normalized matrix.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faultfuse/corpus.hpp"

namespace faultfuse::features {

enum class Family { kSbfl, kMbfl, kTbfl };

inline constexpr Family kFamilies[] = {Family::kSbfl, Family::kMbfl, Family::kTbfl};

std::string_view FamilyName(Family family);  // "SBFL", "MBFL", "TBFL"
Family ParseFamily(std::string_view name);    // throws kConfigError

struct SpectrumCounts {
  std::vector<int> ef, ep, nf, np;  // one entry per statement
  int failing = 0;
  int passing = 0;
};

// Errors: kNoFailingTests.
SpectrumCounts ComputeSpectrum(const corpus::FaultDataset& dataset);

// Suspiciousness formulas. A 0/0 resolves to 0; DStar with a zero
// denominator returns ef^2.
double Tarantula(int ef, int ep, int failing, int passing);
double Ochiai(int ef, int ep, int failing);
double Jaccard(int ef, int ep, int failing);
double DStar(int ef, int ep, int nf);

struct Column {
  std::string name;
  Family family = Family::kSbfl;

  std::string Label() const;  // "family:name"
  friend bool operator==(const Column&, const Column&) = default;
};

// Row-major statements x columns.
struct FeatureMatrix {
  std::vector<Column> columns;
  std::size_t rows = 0;
  std::vector<double> values;

  std::size_t cols() const { return columns.size(); }
  double at(std::size_t r, std::size_t c) const { return values[r * columns.size() + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * columns.size() + c]; }
  std::vector<double> ColumnValues(std::size_t c) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

// ef, ep, nf, np, Tarantula, Ochiai, Jaccard, DStar.
FeatureMatrix SbflFeatures(const SpectrumCounts& counts);

// max-mutant-susp, mean-mutant-susp, mutant-count, killed-by-failing-ratio.
FeatureMatrix MbflFeatures(const corpus::FaultDataset& dataset);

// length, line-flag, variables, symbols, branch-paths. Sources that the toy
// parser rejects still get token counts; their branch paths are 1.
FeatureMatrix TbflFeatures(const corpus::FaultDataset& dataset);

// Side-by-side concatenation; row counts must agree.
FeatureMatrix Concat(const std::vector<FeatureMatrix>& parts);

// Min-max scales each column to [0, 1]; constant columns become 0.
void Normalize(FeatureMatrix& m);

// SBFL + MBFL + TBFL, normalized.
FeatureMatrix AssembleFeatures(const corpus::FaultDataset& dataset);

// features.csv: header "statement_id,family:name,...", one row per statement.
std::string ToCsv(const FeatureMatrix& m);
FeatureMatrix FromCsv(std::string_view csv);

enum class Baseline { kTarantula, kDStar };

// Raw (unnormalized) suspiciousness of every statement under a baseline.
std::vector<double> BaselineScores(const corpus::FaultDataset& dataset, Baseline baseline);

}  // namespace faultfuse::features

#endif  // FAULTFUSE_FEATURES_HPP_
