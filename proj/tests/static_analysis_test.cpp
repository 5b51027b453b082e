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

#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "faultfuse/error.hpp"
#include "faultfuse/static_analysis.hpp"
#include "faultfuse/toy_lang.hpp"
#include "fixtures.hpp"

namespace faultfuse {
namespace {

using static_analysis::AnalyzeSource;
using static_analysis::BuildCfg;
using static_analysis::CountTextFeatures;
using static_analysis::EnumeratePaths;
using toy::TokenKind;

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIoError;
}

TEST(Tokenize, AssignmentTokens) {
  const auto tokens = toy::Tokenize("m = z;");
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[0].kind, TokenKind::kIdentifier);
  EXPECT_EQ(tokens[0].lexeme, "m");
  EXPECT_EQ(tokens[1].kind, TokenKind::kSymbol);
  EXPECT_EQ(tokens[1].lexeme, "=");
  EXPECT_EQ(tokens[2].kind, TokenKind::kIdentifier);
  EXPECT_EQ(tokens[2].lexeme, "z");
  EXPECT_EQ(tokens[3].lexeme, ";");
}

TEST(Tokenize, EmptySource) { EXPECT_TRUE(toy::Tokenize("").empty()); }

TEST(Tokenize, ConditionHeader) {
  int identifiers = 0;
  int symbols = 0;
  for (const auto& t : toy::Tokenize("if (y < z)")) {
    identifiers += t.kind == TokenKind::kIdentifier;
    symbols += t.kind == TokenKind::kSymbol;
  }
  EXPECT_EQ(identifiers, 2);
  EXPECT_EQ(symbols, 3);
}

TEST(Tokenize, ReservedWordsAreKeywords) {
  for (const char* w : {"int", "input", "if", "else", "print"}) {
    const auto tokens = toy::Tokenize(w);
    ASSERT_EQ(tokens.size(), 1u);
    EXPECT_EQ(tokens[0].kind, TokenKind::kKeyword) << w;
  }
  EXPECT_EQ(toy::Tokenize("inputs")[0].kind, TokenKind::kIdentifier);
}

TEST(Tokenize, LexErrorsCarryLine) {
  try {
    toy::Tokenize("m = 1;\nm = $;");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLexError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(CodeOf([] { toy::Tokenize("print(\"abc);"); }), ErrorCode::kLexError);
}

TEST(Tokenize, NonWhitespaceCharactersAreCovered) {
  const std::string src = "print(\"a, b!\", x1 + 42);";
  std::size_t covered = 0;
  for (const auto& t : toy::Tokenize(src)) covered += t.lexeme.size();
  std::size_t non_ws = 0;
  for (char c : src) non_ws += c != ' ';
  EXPECT_EQ(covered, non_ws);
}

TEST(CountTextFeatures, DeclarationRow) {
  const auto f = CountTextFeatures("int x, y, z, m;");
  ASSERT_EQ(f.statements.size(), 1u);
  EXPECT_EQ(f.statements[0].variables, 4);
  EXPECT_EQ(f.statements[0].symbols, 4);
}

TEST(CountTextFeatures, PrintRow) {
  for (const char* src : {"print(\"Median:\", m);", "print(\xE2\x80\x9CMedian:\xE2\x80\x9D, m);"}) {
    const auto f = CountTextFeatures(src);
    ASSERT_EQ(f.statements.size(), 1u);
    EXPECT_EQ(f.statements[0].variables, 1) << src;
    EXPECT_EQ(f.statements[0].symbols, 7) << src;
  }
}

TEST(CountTextFeatures, ElseRow) {
  const auto f = CountTextFeatures("else");
  ASSERT_EQ(f.statements.size(), 1u);
  EXPECT_EQ(f.statements[0].variables, 0);
  EXPECT_EQ(f.statements[0].symbols, 0);
}

TEST(CountTextFeatures, LengthsAndProgramTotals) {
  const auto f = CountTextFeatures("  m = y; //bug\nprint(m);\n");
  ASSERT_EQ(f.statements.size(), 2u);
  EXPECT_EQ(f.statements[0].length, 6);
  EXPECT_EQ(f.statements[1].length, 9);
  EXPECT_EQ(f.program_length, 15);
  EXPECT_EQ(f.line_count, 2);
  EXPECT_EQ(f.variable_total, 3);
  EXPECT_EQ(f.symbol_total, 2 + 3);
}

TEST(CountTextFeatures, TokenConservationPerLine) {
  const auto f = CountTextFeatures(testing::kMedianListing);
  for (const auto& s : f.statements) {
    EXPECT_EQ(s.variables + s.keywords + s.symbols + s.literals, s.tokens) << "line " << s.line;
  }
}

TEST(AnalyzeSource, MedianListingReproducesEveryRow) {
  const auto f = AnalyzeSource(testing::kMedianListing);
  ASSERT_EQ(f.statements.size(), testing::kMedianStaticRows.size());
  for (std::size_t i = 0; i < f.statements.size(); ++i) {
    const auto& want = testing::kMedianStaticRows[i];
    EXPECT_EQ(f.statements[i].branch_paths, want.branch_paths) << "row " << i;
    EXPECT_EQ(f.statements[i].variables, want.variables) << "row " << i;
    EXPECT_EQ(f.statements[i].symbols, want.symbols) << "row " << i;
  }
}

TEST(Parse, Errors) {
  EXPECT_EQ(CodeOf([] { toy::Parse("if (x < y)\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { toy::Parse("else\nm = 1;\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { toy::Parse("m = 1; n = 2;\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { toy::Parse("if (x < y) m = 1;\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { toy::Parse("m = (1 + 2;\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { toy::Parse("m = 1\n;\n"); }), ErrorCode::kParseError);
}

TEST(Parse, ElseBindsToNearestIf) {
  const auto p = toy::Parse("if (a)\nif (b)\nm = 1;\nelse\nm = 2;\n");
  ASSERT_EQ(p.body.size(), 1u);
  EXPECT_TRUE(p.body[0].else_branch.empty());
  EXPECT_EQ(p.body[0].then_branch[0].else_line, 4);
}

TEST(Parse, ElseFollowsIndentation) {
  const auto p = toy::Parse(testing::kMedianListing);
  ASSERT_EQ(p.body.size(), 5u);
  EXPECT_EQ(p.body[3].else_line, 9);
  // With everything flush left the innermost open if takes the else.
  const auto flat = toy::Parse("if (a)\nif (b)\nm = 1;\nelse\nm = 2;\n");
  EXPECT_EQ(flat.body[0].then_branch[0].else_line, 4);
}

TEST(Parse, FormatRoundTrip) {
  const auto p = toy::Parse(testing::kMedianListing);
  const std::string once = toy::FormatProgram(p);
  EXPECT_EQ(toy::FormatProgram(toy::Parse(once)), once);
  EXPECT_EQ(toy::Parse(once).body.size(), 5u);
  EXPECT_EQ(toy::FormatUnit(p, 7), "else if (x < z)");
  EXPECT_EQ(toy::FormatUnit(p, 9), "else");
  EXPECT_EQ(toy::FormatUnit(p, 14), "print(\"Median:\", m);");
  EXPECT_EQ(toy::FormatExpr(toy::Parse("m = (a + b) * c - (d - e);").body[0].value),
            "(a + b) * c - (d - e)");
}

TEST(Execute, MedianOfThree) {
  const auto p = toy::Parse(
      "input x, y, z;\nm = z;\nif (y < z)\n  if (x < y)\n    m = y;\n  else if (x < z)\n"
      "    m = x;\nelse\n  if (x > y)\n    m = y;\n  else if (x > z)\n    m = x;\nprint(m);\n");
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      for (int z = 0; z < 4; ++z) {
        std::vector<int> v{x, y, z};
        std::sort(v.begin(), v.end());
        EXPECT_EQ(toy::Execute(p, {x, y, z}).output, std::to_string(v[1]) + "\n");
      }
    }
  }
}

TEST(Execute, CoverageAndDivisionByZero) {
  const auto p = toy::Parse("input a;\nif (a > 0)\nb = 1;\nelse\nb = 10 / a;\nprint(b);\n");
  const auto pos = toy::Execute(p, {3});
  EXPECT_EQ(pos.covered_lines, (std::vector<int>{1, 2, 3, 6}));
  const auto zero = toy::Execute(p, {0});
  EXPECT_TRUE(zero.runtime_error);
  EXPECT_EQ(zero.covered_lines, (std::vector<int>{1, 2, 4, 5}));
}

TEST(Mutation, OperatorsAtAssignment) {
  const auto p = toy::Parse("input x, y;\nm = x;\nprint(m);\n");
  const auto mutants = toy::MutantsAt(p, 2);
  std::set<std::string> descriptions;
  for (const auto& m : mutants) descriptions.insert(m.description);
  EXPECT_TRUE(descriptions.count("m = x; => m = y;"));
  EXPECT_TRUE(descriptions.count("m = x; => m = m;"));
  EXPECT_TRUE(descriptions.count("m = x; => ;"));
  EXPECT_EQ(mutants.size(), 3u);
}

TEST(Mutation, RelationalFlipsAndUnitsWithoutExpressions) {
  const auto p = toy::Parse("input a;\nif (a < 3)\nb = a + 1;\nelse\nb = 0;\n");
  int relational = 0;
  for (const auto& m : toy::MutantsAt(p, 2)) relational += m.op == toy::MutationOperator::kRelational;
  EXPECT_EQ(relational, 5);
  EXPECT_TRUE(toy::MutantsAt(p, 4).empty());
  EXPECT_TRUE(toy::MutantsAt(p, 1).empty());
}

TEST(Cfg, StraightLine) {
  const auto cfg = BuildCfg("a = 1;\nb = 2;\nc = a + b;\n");
  EXPECT_EQ(cfg.blocks.size(), 1u);
  EXPECT_EQ(cfg.entry, cfg.exit);
}

TEST(Cfg, SingleIfElse) {
  const auto cfg = BuildCfg("if (a < b)\nm = a;\nelse\nm = b;\n");
  ASSERT_EQ(cfg.blocks.size(), 4u);
  EXPECT_TRUE(cfg.blocks[cfg.entry].conditional);
  EXPECT_EQ(cfg.blocks[cfg.entry].successors.size(), 2u);
  EXPECT_EQ(EnumeratePaths(cfg).size(), 2u);
}

// Independent oracle: distinct executed-line sets over an exhaustive input
// grid equal the number of acyclic CFG paths for this loop-free program.
TEST(Cfg, MedianLeafPathsMatchExecutionOracle) {
  const auto program = toy::Parse(testing::kMedianListing);
  const auto cfg = BuildCfg(program);
  EXPECT_EQ(EnumeratePaths(cfg).size(), 6u);

  std::set<std::vector<int>> distinct;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      for (int z = 0; z < 4; ++z) distinct.insert(toy::Execute(program, {x, y, z}).covered_lines);
    }
  }
  EXPECT_EQ(distinct.size(), 6u);
}

TEST(Cfg, StructuralInvariants) {
  for (std::string_view src :
       {testing::kMedianListing,
        std::string_view("input a, b;\nif (a > b)\nif (a > 0)\nm = 1;\nm = 2;\nprint(m);\n")}) {
    const auto program = toy::Parse(src);
    const auto cfg = BuildCfg(program);
    const std::size_t n = cfg.blocks.size();
    // Reachability both ways.
    std::vector<bool> from_entry(n, false), to_exit(n, false);
    std::vector<int> stack{cfg.entry};
    from_entry[cfg.entry] = true;
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      for (int s : cfg.blocks[b].successors) {
        if (!from_entry[s]) {
          from_entry[s] = true;
          stack.push_back(s);
        }
      }
    }
    to_exit[cfg.exit] = true;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t b = 0; b < n; ++b) {
        for (int s : cfg.blocks[b].successors) {
          if (to_exit[s] && !to_exit[b]) to_exit[b] = changed = true;
        }
      }
    }
    for (std::size_t b = 0; b < n; ++b) {
      EXPECT_TRUE(from_entry[b]) << b;
      EXPECT_TRUE(to_exit[b]) << b;
      EXPECT_EQ(cfg.blocks[b].successors.size(), cfg.blocks[b].conditional ? 2u : (b == static_cast<std::size_t>(cfg.exit) ? 0u : 1u));
    }
    for (int line : program.UnitLines()) {
      int owners = 0;
      for (const auto& blk : cfg.blocks) owners += std::count(blk.lines.begin(), blk.lines.end(), line);
      EXPECT_EQ(owners, 1) << "line " << line;
    }
  }
}

TEST(BranchPathCounts, NoConditionalMeansOnePath) {
  EXPECT_EQ(static_analysis::BranchPathCounts(toy::Parse("a = 1;\nprint(a);\n")),
            (std::vector<int>{1, 1}));
}

}  // namespace
}  // namespace faultfuse
