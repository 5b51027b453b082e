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

#include "faultfuse/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "faultfuse/error.hpp"
#include "faultfuse/static_analysis.hpp"
#include "text_util.hpp"

namespace faultfuse::features {
namespace {

constexpr const char* kModule = "dynamic_features";

double Ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

FeatureMatrix Empty(std::size_t rows, std::vector<std::pair<const char*, Family>> cols) {
  FeatureMatrix m;
  for (auto& [name, family] : cols) m.columns.push_back({name, family});
  m.rows = rows;
  m.values.assign(rows * m.columns.size(), 0.0);
  return m;
}

}  // namespace

std::string_view FamilyName(Family family) {
  switch (family) {
    case Family::kSbfl: return "SBFL";
    case Family::kMbfl: return "MBFL";
    case Family::kTbfl: return "TBFL";
  }
  return "?";
}

Family ParseFamily(std::string_view name) {
  for (Family f : kFamilies) {
    if (FamilyName(f) == name) return f;
  }
  throw Error(ErrorCode::kConfigError, kModule, "unknown feature family '" + std::string(name) + "'");
}

std::string Column::Label() const { return std::string(FamilyName(family)) + ":" + name; }

std::vector<double> FeatureMatrix::ColumnValues(std::size_t c) const {
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
  return out;
}

SpectrumCounts ComputeSpectrum(const corpus::FaultDataset& d) {
  SpectrumCounts s;
  const std::size_t n = d.statement_count();
  s.ef.assign(n, 0);
  s.ep.assign(n, 0);
  for (std::size_t t = 0; t < d.test_count(); ++t) {
    const bool fail = d.outcomes[t] == corpus::Verdict::kFail;
    (fail ? s.failing : s.passing) += 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (d.covers(t, i)) (fail ? s.ef : s.ep)[i] += 1;
    }
  }
  if (s.failing == 0) throw Error(ErrorCode::kNoFailingTests, kModule, d.name + ": no failing test");
  s.nf.resize(n);
  s.np.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.nf[i] = s.failing - s.ef[i];
    s.np[i] = s.passing - s.ep[i];
  }
  return s;
}

double Tarantula(int ef, int ep, int failing, int passing) {
  const double f = Ratio(ef, failing), p = Ratio(ep, passing);
  return Ratio(f, f + p);
}

double Ochiai(int ef, int ep, int failing) {
  return Ratio(ef, std::sqrt(static_cast<double>(failing) * (ef + ep)));
}

double Jaccard(int ef, int ep, int failing) { return Ratio(ef, failing + ep); }

double DStar(int ef, int ep, int nf) {
  const double num = static_cast<double>(ef) * ef;
  const int den = ep + nf;
  return den == 0 ? num : num / den;
}

FeatureMatrix SbflFeatures(const SpectrumCounts& s) {
  FeatureMatrix m = Empty(s.ef.size(), {{"ef", Family::kSbfl},
                                        {"ep", Family::kSbfl},
                                        {"nf", Family::kSbfl},
                                        {"np", Family::kSbfl},
                                        {"tarantula", Family::kSbfl},
                                        {"ochiai", Family::kSbfl},
                                        {"jaccard", Family::kSbfl},
                                        {"dstar", Family::kSbfl}});
  for (std::size_t i = 0; i < m.rows; ++i) {
    m.at(i, 0) = s.ef[i];
    m.at(i, 1) = s.ep[i];
    m.at(i, 2) = s.nf[i];
    m.at(i, 3) = s.np[i];
    m.at(i, 4) = Tarantula(s.ef[i], s.ep[i], s.failing, s.passing);
    m.at(i, 5) = Ochiai(s.ef[i], s.ep[i], s.failing);
    m.at(i, 6) = Jaccard(s.ef[i], s.ep[i], s.failing);
    m.at(i, 7) = DStar(s.ef[i], s.ep[i], s.nf[i]);
  }
  return m;
}

FeatureMatrix MbflFeatures(const corpus::FaultDataset& d) {
  FeatureMatrix m = Empty(d.statement_count(), {{"max-mutant-susp", Family::kMbfl},
                                                {"mean-mutant-susp", Family::kMbfl},
                                                {"mutant-count", Family::kMbfl},
                                                {"killed-by-failing-ratio", Family::kMbfl}});
  const double failing = static_cast<double>(d.failing_count());
  std::vector<double> sum(m.rows, 0.0), fail_killed(m.rows, 0.0);
  std::vector<int> count(m.rows, 0);
  for (const corpus::Mutant& mu : d.mutants) {
    int akf = 0, akp = 0;
    for (std::size_t t = 0; t < d.test_count(); ++t) {
      if (!mu.kills[t]) continue;
      (d.outcomes[t] == corpus::Verdict::kFail ? akf : akp) += 1;
    }
    const auto s = static_cast<std::size_t>(mu.statement);
    const double susp = Ratio(akf, std::sqrt(failing * (akf + akp)));
    m.at(s, 0) = count[s] == 0 ? susp : std::max(m.at(s, 0), susp);
    sum[s] += susp;
    fail_killed[s] += akf > 0;
    ++count[s];
  }
  for (std::size_t s = 0; s < m.rows; ++s) {
    if (count[s] == 0) continue;
    m.at(s, 1) = sum[s] / count[s];
    m.at(s, 2) = count[s];
    m.at(s, 3) = fail_killed[s] / count[s];
  }
  return m;
}

FeatureMatrix TbflFeatures(const corpus::FaultDataset& d) {
  FeatureMatrix m = Empty(d.statement_count(), {{"length", Family::kTbfl},
                                                {"line-flag", Family::kTbfl},
                                                {"variables", Family::kTbfl},
                                                {"symbols", Family::kTbfl},
                                                {"branch-paths", Family::kTbfl}});
  const std::string source = d.ProgramSource();
  static_analysis::TextFeatures text;
  bool parsed = true;
  try {
    text = static_analysis::AnalyzeSource(source);
  } catch (const Error&) {
    text = static_analysis::CountTextFeatures(source);
    parsed = false;
  }
  for (const auto& f : text.statements) {
    const auto row = static_cast<std::size_t>(f.line - 1);
    if (row >= m.rows) continue;
    m.at(row, 0) = f.length;
    m.at(row, 1) = f.line_flag;
    m.at(row, 2) = f.variables;
    m.at(row, 3) = f.symbols;
    m.at(row, 4) = parsed ? f.branch_paths : 1;
  }
  return m;
}

FeatureMatrix Concat(const std::vector<FeatureMatrix>& parts) {
  FeatureMatrix out;
  if (parts.empty()) return out;
  out.rows = parts.front().rows;
  for (const auto& p : parts) {
    if (p.rows != out.rows) {
      throw Error(ErrorCode::kShapeMismatch, kModule, "feature blocks disagree on row count");
    }
    out.columns.insert(out.columns.end(), p.columns.begin(), p.columns.end());
  }
  out.values.reserve(out.rows * out.columns.size());
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (const auto& p : parts) {
      for (std::size_t c = 0; c < p.cols(); ++c) out.values.push_back(p.at(r, c));
    }
  }
  return out;
}

void Normalize(FeatureMatrix& m) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
      const double v = m.at(r, c);
      if (r == 0 || v < lo) lo = v;
      if (r == 0 || v > hi) hi = v;
    }
    const double span = hi - lo;
    for (std::size_t r = 0; r < m.rows; ++r) {
      m.at(r, c) = span > 0.0 ? (m.at(r, c) - lo) / span : 0.0;
    }
  }
}

FeatureMatrix AssembleFeatures(const corpus::FaultDataset& d) {
  FeatureMatrix m = Concat({SbflFeatures(ComputeSpectrum(d)), MbflFeatures(d), TbflFeatures(d)});
  Normalize(m);
  return m;
}

std::string ToCsv(const FeatureMatrix& m) {
  std::string out = "statement_id";
  for (const auto& c : m.columns) out += "," + c.Label();
  out += "\n";
  for (std::size_t r = 0; r < m.rows; ++r) {
    out += std::to_string(r);
    for (std::size_t c = 0; c < m.cols(); ++c) out += "," + text::FormatDouble(m.at(r, c));
    out += "\n";
  }
  return out;
}

FeatureMatrix FromCsv(std::string_view csv) {
  const auto lines = text::Lines(csv);
  if (lines.empty()) throw Error(ErrorCode::kDimensionMismatch, kModule, "features.csv is empty");
  FeatureMatrix m;
  const auto header = text::Split(lines[0], ',');
  if (header.empty() || header[0] != "statement_id") {
    throw Error(ErrorCode::kDimensionMismatch, kModule, "features.csv: bad header");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    const auto colon = header[i].find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kDimensionMismatch, kModule, "features.csv: column without family");
    }
    m.columns.push_back({std::string(header[i].substr(colon + 1)), ParseFamily(header[i].substr(0, colon))});
  }
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto cells = text::Split(lines[l], ',');
    if (cells.size() != header.size() || text::ParseNumber<std::size_t>(cells[0]) != m.rows) {
      throw Error(ErrorCode::kDimensionMismatch, kModule,
                  "features.csv: malformed row " + std::to_string(l + 1));
    }
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto v = text::ParseNumber<double>(cells[c]);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::kInvalidCellValue, kModule,
                    "features.csv: bad value on row " + std::to_string(l + 1));
      }
      m.values.push_back(*v);
    }
    ++m.rows;
  }
  return m;
}

std::vector<double> BaselineScores(const corpus::FaultDataset& d, Baseline baseline) {
  const SpectrumCounts s = ComputeSpectrum(d);
  std::vector<double> out(d.statement_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = baseline == Baseline::kTarantula ? Tarantula(s.ef[i], s.ep[i], s.failing, s.passing)
                                              : DStar(s.ef[i], s.ep[i], s.nf[i]);
  }
  return out;
}

}  // namespace faultfuse::features
