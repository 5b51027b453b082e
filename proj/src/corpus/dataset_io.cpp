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
#include <set>
#include <string>

#include "text_util.hpp"
#include "faultfuse/corpus.hpp"
#include "faultfuse/error.hpp"

namespace faultfuse::corpus {
namespace {

constexpr std::string_view kModule = "corpus";

[[noreturn]] void Fail(ErrorCode code, const std::filesystem::path& file, std::size_t row,
                       const std::string& what) {
  std::string where = file.filename().string();
  if (row > 0) where += ":" + std::to_string(row);
  throw Error(code, kModule, where + ": " + what);
}

std::string ReadRequired(const std::filesystem::path& path) {
  auto content = text::ReadFile(path);
  if (!content) throw Error(ErrorCode::kMissingFile, kModule, "missing " + path.string());
  return std::move(*content);
}

int ParseId(std::string_view s, const std::filesystem::path& file, std::size_t row) {
  auto v = text::ParseNumber<int>(s);
  if (!v || *v < 0) Fail(ErrorCode::kInvalidCellValue, file, row, "bad integer '" + std::string(s) + "'");
  return *v;
}

std::uint8_t ParseBit(std::string_view s, const std::filesystem::path& file, std::size_t row) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  Fail(ErrorCode::kInvalidCellValue, file, row, "expected 0 or 1, found '" + std::string(s) + "'");
}

}  // namespace

std::size_t FaultDataset::failing_count() const {
  return static_cast<std::size_t>(std::count(outcomes.begin(), outcomes.end(), Verdict::kFail));
}

bool FaultDataset::is_fault(int statement) const {
  return std::find(faults.begin(), faults.end(), statement) != faults.end();
}

std::string FaultDataset::ProgramSource() const {
  std::string out;
  for (const Statement& s : statements) {
    out += s.text;
    out += '\n';
  }
  return out;
}

void FaultDataset::Validate() const {
  const std::size_t n_stmt = statements.size();
  const std::size_t n_test = outcomes.size();
  const std::string who = name.empty() ? "dataset" : name;
  if (n_stmt == 0) throw Error(ErrorCode::kDimensionMismatch, kModule, who + ": no statements");
  if (n_test == 0) throw Error(ErrorCode::kDimensionMismatch, kModule, who + ": no tests");
  for (std::size_t i = 0; i < n_stmt; ++i) {
    if (statements[i].id != static_cast<int>(i)) {
      throw Error(ErrorCode::kInvalidCellValue, kModule,
                  who + ": statement ids must be 0..n-1 in order");
    }
  }
  if (test_ids.size() != n_test || coverage.size() != n_test * n_stmt) {
    throw Error(ErrorCode::kDimensionMismatch, kModule,
                who + ": coverage is not tests x statements");
  }
  for (std::uint8_t c : coverage) {
    if (c > 1) throw Error(ErrorCode::kInvalidCellValue, kModule, who + ": non-binary coverage");
  }
  for (const Mutant& m : mutants) {
    if (m.statement < 0 || static_cast<std::size_t>(m.statement) >= n_stmt) {
      throw Error(ErrorCode::kDanglingReference, kModule,
                  who + ": mutant " + m.id + " targets unknown statement");
    }
    if (m.kills.size() != n_test) {
      throw Error(ErrorCode::kDimensionMismatch, kModule,
                  who + ": mutant " + m.id + " kill vector length differs from test count");
    }
  }
  std::set<int> seen;
  for (int f : faults) {
    if (f < 0 || static_cast<std::size_t>(f) >= n_stmt) {
      throw Error(ErrorCode::kDanglingReference, kModule,
                  who + ": fault id " + std::to_string(f) + " out of range");
    }
    if (!seen.insert(f).second) {
      throw Error(ErrorCode::kInvalidCellValue, kModule,
                  who + ": duplicate fault id " + std::to_string(f));
    }
  }
  if (!faults.empty() && failing_count() == 0) {
    throw Error(ErrorCode::kNoFailingTests, kModule, who + ": faults given but no test fails");
  }
}

FaultDataset LoadDataset(const std::filesystem::path& dir) {
  FaultDataset d;
  d.name = std::filesystem::absolute(dir).lexically_normal().filename().string();
  if (d.name.empty()) d.name = std::filesystem::absolute(dir).parent_path().filename().string();

  const auto stmt_path = dir / "statements.tsv";
  const auto cov_path = dir / "coverage.csv";
  const auto out_path = dir / "outcomes.csv";
  const auto mut_path = dir / "mutants.csv";
  const auto fault_path = dir / "faults.txt";
  const std::string stmt_text = ReadRequired(stmt_path);
  const std::string cov_text = ReadRequired(cov_path);
  const std::string out_text = ReadRequired(out_path);
  const std::string mut_text = ReadRequired(mut_path);
  const std::string fault_text = ReadRequired(fault_path);

  std::size_t row = 0;
  for (std::string_view line : text::Lines(stmt_text)) {
    ++row;
    auto cells = text::Split(line, '\t');
    if (cells.size() < 4) Fail(ErrorCode::kDimensionMismatch, stmt_path, row, "expected 4 columns");
    Statement s;
    s.id = ParseId(cells[0], stmt_path, row);
    s.file = std::string(cells[1]);
    s.line = ParseId(cells[2], stmt_path, row);
    // The source text is everything after the third tab.
    const std::size_t offset = cells[0].size() + cells[1].size() + cells[2].size() + 3;
    s.text = std::string(line.substr(offset));
    if (s.id != static_cast<int>(d.statements.size())) {
      Fail(ErrorCode::kInvalidCellValue, stmt_path, row, "statement ids must be 0..n-1 in order");
    }
    d.statements.push_back(std::move(s));
  }
  const std::size_t n_stmt = d.statements.size();

  const auto cov_lines = text::Lines(cov_text);
  if (cov_lines.empty()) Fail(ErrorCode::kDimensionMismatch, cov_path, 0, "missing header row");
  const auto header = text::Split(cov_lines[0], ',');
  if (header.size() != n_stmt) {
    Fail(ErrorCode::kDimensionMismatch, cov_path, 1,
         "header lists " + std::to_string(header.size()) + " statements, statements.tsv has " +
             std::to_string(n_stmt));
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (ParseId(header[i], cov_path, 1) != static_cast<int>(i)) {
      Fail(ErrorCode::kDimensionMismatch, cov_path, 1, "header must list statement ids in order");
    }
  }
  if (cov_lines.size() == 1) Fail(ErrorCode::kDimensionMismatch, cov_path, 0, "no tests");
  for (std::size_t r = 1; r < cov_lines.size(); ++r) {
    const auto cells = text::Split(cov_lines[r], ',');
    if (cells.size() != n_stmt) {
      Fail(ErrorCode::kDimensionMismatch, cov_path, r + 1, "row length differs from statement count");
    }
    for (std::string_view c : cells) d.coverage.push_back(ParseBit(c, cov_path, r + 1));
  }
  const std::size_t n_test = cov_lines.size() - 1;

  row = 0;
  for (std::string_view line : text::Lines(out_text)) {
    ++row;
    const auto cells = text::Split(line, ',');
    if (cells.size() != 2) Fail(ErrorCode::kDimensionMismatch, out_path, row, "expected test_id,verdict");
    if (cells[1] == "pass") {
      d.outcomes.push_back(Verdict::kPass);
    } else if (cells[1] == "fail") {
      d.outcomes.push_back(Verdict::kFail);
    } else {
      Fail(ErrorCode::kInvalidCellValue, out_path, row, "verdict must be pass or fail");
    }
    d.test_ids.emplace_back(cells[0]);
  }
  if (d.outcomes.size() != n_test) {
    Fail(ErrorCode::kDimensionMismatch, out_path, 0,
         std::to_string(d.outcomes.size()) + " outcomes for " + std::to_string(n_test) +
             " coverage rows");
  }

  row = 0;
  for (std::string_view line : text::Lines(mut_text)) {
    ++row;
    const auto cells = text::Split(line, ',');
    if (cells.size() != n_test + 2) {
      Fail(ErrorCode::kDimensionMismatch, mut_path, row, "kill vector length differs from test count");
    }
    Mutant m;
    m.id = std::string(cells[0]);
    m.statement = ParseId(cells[1], mut_path, row);
    if (static_cast<std::size_t>(m.statement) >= n_stmt) {
      Fail(ErrorCode::kDanglingReference, mut_path, row, "statement id out of range");
    }
    for (std::size_t i = 2; i < cells.size(); ++i) m.kills.push_back(ParseBit(cells[i], mut_path, row));
    d.mutants.push_back(std::move(m));
  }

  row = 0;
  for (std::string_view line : text::Lines(fault_text)) {
    ++row;
    const int id = ParseId(line, fault_path, row);
    if (static_cast<std::size_t>(id) >= n_stmt) {
      Fail(ErrorCode::kDanglingReference, fault_path, row,
           "fault id " + std::to_string(id) + " out of range");
    }
    d.faults.push_back(id);
  }

  d.Validate();
  return d;
}

void SaveDataset(const FaultDataset& d, const std::filesystem::path& dir) {
  d.Validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, kModule, "cannot create " + dir.string());

  std::string out;
  for (const Statement& s : d.statements) {
    out += std::to_string(s.id) + '\t' + s.file + '\t' + std::to_string(s.line) + '\t' + s.text + '\n';
  }
  text::WriteFile(dir / "statements.tsv", out, kModule);

  const std::size_t n_stmt = d.statements.size();
  out.clear();
  for (std::size_t i = 0; i < n_stmt; ++i) {
    if (i) out += ',';
    out += std::to_string(i);
  }
  out += '\n';
  for (std::size_t t = 0; t < d.test_count(); ++t) {
    for (std::size_t i = 0; i < n_stmt; ++i) {
      if (i) out += ',';
      out += d.covers(t, i) ? '1' : '0';
    }
    out += '\n';
  }
  text::WriteFile(dir / "coverage.csv", out, kModule);

  out.clear();
  for (std::size_t t = 0; t < d.test_count(); ++t) {
    out += d.test_ids[t] + (d.outcomes[t] == Verdict::kFail ? ",fail\n" : ",pass\n");
  }
  text::WriteFile(dir / "outcomes.csv", out, kModule);

  out.clear();
  for (const Mutant& m : d.mutants) {
    out += m.id + ',' + std::to_string(m.statement);
    for (std::uint8_t k : m.kills) {
      out += ',';
      out += k ? '1' : '0';
    }
    out += '\n';
  }
  text::WriteFile(dir / "mutants.csv", out, kModule);

  out.clear();
  for (int f : d.faults) out += std::to_string(f) + '\n';
  text::WriteFile(dir / "faults.txt", out, kModule);
}

}  // namespace faultfuse::corpus
