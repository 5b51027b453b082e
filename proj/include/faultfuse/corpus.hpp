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

#ifndef FAULTFUSE_CORPUS_HPP_
#define FAULTFUSE_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faultfuse/toy_lang.hpp"

namespace faultfuse::corpus {

enum class Verdict : std::uint8_t { kPass, kFail };

struct Statement {
  int id = 0;
  std::string file;
  int line = 0;
  std::string text;  // may keep leading indentation

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Mutant {
  std::string id;
  int statement = 0;
  std::vector<std::uint8_t> kills;  // per test, 1 = result changed

  friend bool operator==(const Mutant&, const Mutant&) = default;
};

// One faulty program version: coverage spectra, verdicts, mutant kill
// vectors and the ground-truth faulty statements. Immutable once loaded.
struct FaultDataset {
  std::string name;
  std::vector<Statement> statements;
  std::vector<std::string> test_ids;
  std::vector<std::uint8_t> coverage;  // row-major, tests x statements
  std::vector<Verdict> outcomes;
  std::vector<Mutant> mutants;
  std::vector<int> faults;  // file order, no duplicates

  std::size_t test_count() const { return outcomes.size(); }
  std::size_t statement_count() const { return statements.size(); }
  std::size_t failing_count() const;

  bool covers(std::size_t test, std::size_t statement) const {
    return coverage[test * statements.size() + statement] != 0;
  }

  bool is_fault(int statement) const;

  // Statement texts in id order joined by newlines; line k of the result is
  // statement k-1.
  std::string ProgramSource() const;

  // Throws on any violated invariant (see LoadDataset for the codes).
  void Validate() const;

  friend bool operator==(const FaultDataset&, const FaultDataset&) = default;
};

// Reads statements.tsv, coverage.csv, outcomes.csv, mutants.csv and
// faults.txt. Errors: kMissingFile, kDimensionMismatch, kInvalidCellValue,
// kDanglingReference, kNoFailingTests (faults given but no failing test).
// The dataset name is the directory's base name.
FaultDataset LoadDataset(const std::filesystem::path& dir);

// Writes the five files; LoadDataset(SaveDataset(d)) == d and saving a
// loaded canonical directory reproduces it byte for byte.
void SaveDataset(const FaultDataset& dataset, const std::filesystem::path& dir);

struct SyntheticSpec {
  std::string template_name = "median3";  // median3 | triangle | maxarray
  int statements = 0;  // maxarray only (sets the array length); 0 = default
  int tests = 100;
  // Operator used to corrupt the program; nullopt picks any applicable one.
  std::optional<toy::MutationOperator> fault_rule;
  // Statement id to corrupt; nullopt picks one.
  std::optional<int> fault_statement;
  std::uint64_t seed = 0;
};

std::vector<std::string> TemplateNames();

// Correct (uncorrupted) source of a template, canonical formatting.
std::string TemplateSource(const std::string& template_name, int statements = 0);

// Deterministic in `spec`. Exactly one statement is corrupted; at least one
// test fails and at least one passes. Mutants are all first-order mutants of
// the faulty program; a test kills a mutant when the outputs differ.
// Errors: kConfigError (bad spec), kInfeasibleSpec (no failing test found
// after retrying inputs and candidate corruptions).
FaultDataset GenerateSynthetic(const SyntheticSpec& spec);

struct Fold {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Stratified k-fold partition of labeled instances: positives are dealt
// round-robin first, then negatives continue the rotation, so fold sizes
// differ by at most one and each fold gets a positive while they last.
// Errors: kConfigError (k < 2), kTooFewInstances (fewer instances than k).
std::vector<Fold> SplitFolds(std::span<const int> labels, int k, std::uint64_t seed);

}  // namespace faultfuse::corpus

#endif  // FAULTFUSE_CORPUS_HPP_
