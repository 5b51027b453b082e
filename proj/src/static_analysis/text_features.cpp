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

#include <map>
#include <string>

#include "faultfuse/static_analysis.hpp"

namespace faultfuse::static_analysis {
namespace {

bool IsQuoteAt(std::string_view s, std::size_t i) {
  return s[i] == '"' || s.substr(i, 3) == "\xE2\x80\x9C" || s.substr(i, 3) == "\xE2\x80\x9D";
}

// Code text of one line: trailing `//` comment and surrounding blanks removed.
std::string_view CodeText(std::string_view line) {
  bool in_string = false;
  std::size_t end = line.size();
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (IsQuoteAt(line, i)) {
      in_string = !in_string;
    } else if (!in_string && line[i] == '/' && i + 1 < line.size() && line[i + 1] == '/') {
      end = i;
      break;
    }
  }
  line = line.substr(0, end);
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = line.find_last_not_of(" \t\r");
  return line.substr(first, last - first + 1);
}

int CodePoints(std::string_view s) {
  int n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<std::string_view> SplitLines(std::string_view source) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= source.size()) {
    const auto nl = source.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(source.substr(start));
      break;
    }
    lines.push_back(source.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

TextFeatures CountTextFeatures(std::string_view source) {
  const std::vector<toy::Token> tokens = toy::Tokenize(source);
  const std::vector<std::string_view> lines = SplitLines(source);

  std::map<int, StatementFeatures> per_line;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const toy::Token& t = tokens[i];
    StatementFeatures& f = per_line[t.line];
    f.line = t.line;
    ++f.tokens;
    switch (t.kind) {
      case toy::TokenKind::kIdentifier: {
        const bool callee = i + 1 < tokens.size() && tokens[i + 1].line == t.line &&
                            tokens[i + 1].kind == toy::TokenKind::kSymbol &&
                            tokens[i + 1].lexeme == "(";
        (callee ? f.keywords : f.variables)++;
        break;
      }
      case toy::TokenKind::kKeyword:
        ++f.keywords;
        break;
      case toy::TokenKind::kSymbol:
        ++f.symbols;
        break;
      case toy::TokenKind::kLiteral:
      case toy::TokenKind::kStringFragment:
        ++f.literals;
        break;
    }
  }

  TextFeatures out;
  for (auto& [line, f] : per_line) {
    f.length = CodePoints(CodeText(lines[line - 1]));
    out.program_length += f.length;
    out.line_count += f.line_flag;
    out.variable_total += f.variables;
    out.symbol_total += f.symbols;
    out.statements.push_back(f);
  }
  return out;
}

TextFeatures AnalyzeSource(std::string_view source) {
  TextFeatures out = CountTextFeatures(source);
  const toy::Program program = toy::Parse(source);
  const std::vector<int> units = program.UnitLines();
  const std::vector<int> paths = BranchPathCounts(program);
  std::map<int, int> by_line;
  for (std::size_t i = 0; i < units.size(); ++i) by_line[units[i]] = paths[i];
  for (StatementFeatures& f : out.statements) f.branch_paths = by_line[f.line];
  return out;
}

}  // namespace faultfuse::static_analysis
