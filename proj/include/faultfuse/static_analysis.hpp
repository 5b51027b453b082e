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

#ifndef FAULTFUSE_STATIC_ANALYSIS_HPP_
#define FAULTFUSE_STATIC_ANALYSIS_HPP_

// Text-based statement features: line length, variable and symbol counts,
// and branch-path counts derived from the program's control structure.

#include <string_view>
#include <vector>

#include "faultfuse/toy_lang.hpp"

namespace faultfuse::static_analysis {

struct BasicBlock {
  std::vector<int> lines;  // statement units, in execution order
  bool conditional = false;
  std::vector<int> successors;  // conditional: {taken, not taken}
};

struct Cfg {
  std::vector<BasicBlock> blocks;
  int entry = 0;
  int exit = 0;

  // Index of the block holding `line`, or -1.
  int BlockOfLine(int line) const;
};

Cfg BuildCfg(const toy::Program& program);
Cfg BuildCfg(std::string_view source);

// Every acyclic entry -> exit path as a block sequence, by depth-first search.
std::vector<std::vector<int>> EnumeratePaths(const Cfg& cfg);

// Branch-path count of every unit, aligned with program.UnitLines():
//  - a statement inside a conditional arm that holds no nested conditional: 1
//  - an `if` / `else if` header nested inside another conditional: 2
//  - a standalone `else`: number of leaf paths through its arm
//  - the outermost `if` headers: leaf paths of their larger arm; every
//    statement outside all conditionals takes the largest such value (1 when
//    the program has no conditional)
std::vector<int> BranchPathCounts(const toy::Program& program);

struct StatementFeatures {
  int line = 0;
  int length = 0;        // code points, comment and surrounding blanks removed
  int line_flag = 1;     // 1 per code line; sums to the line count
  int variables = 0;     // identifiers that are neither reserved nor callees
  int symbols = 0;       // operator and punctuation tokens, quotes included
  int keywords = 0;      // reserved words and callee names
  int literals = 0;      // numbers and string fragments
  int tokens = 0;
  int branch_paths = 0;  // filled by AnalyzeSource only
};

struct TextFeatures {
  std::vector<StatementFeatures> statements;  // one per line carrying tokens
  long program_length = 0;                    // sum of per-line lengths
  long line_count = 0;
  long variable_total = 0;
  long symbol_total = 0;
};

// Token-level counts only; works on fragments that do not parse.
TextFeatures CountTextFeatures(std::string_view source);

// Counts plus branch paths. Throws kLexError / kParseError.
TextFeatures AnalyzeSource(std::string_view source);

}  // namespace faultfuse::static_analysis

#endif  // FAULTFUSE_STATIC_ANALYSIS_HPP_
