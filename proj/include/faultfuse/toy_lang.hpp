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

#ifndef FAULTFUSE_TOY_LANG_HPP_
#define FAULTFUSE_TOY_LANG_HPP_

// A small C-like language used for the static features and the synthetic
// corpus: declarations, `input`, assignments, `if` / `else if` / `else`
// chains with single-statement arms, integer expressions and `print`.
// Exactly one statement (or standalone `else`) per source line.
//
// Arms carry no braces, so an `else` binds to the nearest open `if` whose
// line has the same indentation as the `else` line; when no open `if` lines
// up with it, the nearest open `if` takes it (the usual C rule).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace faultfuse::toy {

enum class TokenKind {
  kIdentifier,
  kKeyword,
  kSymbol,
  kLiteral,
  kStringFragment,
};

struct Token {
  TokenKind kind;
  std::string lexeme;
  int line;    // 1-based
  int column;  // 0-based byte offset within the line
};

bool IsReservedWord(std::string_view word);

// Throws Error(kLexError) on an illegal character or unterminated string.
// Comments (`//` to end of line) produce no tokens. Inside a string literal,
// each quote and punctuation character is its own kSymbol token and runs of
// letters/digits become kStringFragment tokens.
std::vector<Token> Tokenize(std::string_view source);

struct Expr {
  enum class Kind { kNumber, kVariable, kUnary, kBinary };

  Kind kind = Kind::kNumber;
  std::int64_t value = 0;
  std::string name;  // variable name or operator lexeme
  std::vector<Expr> operands;

  static Expr Number(std::int64_t v);
  static Expr Variable(std::string n);
  static Expr Unary(std::string op, Expr operand);
  static Expr Binary(std::string op, Expr lhs, Expr rhs);

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct PrintArg {
  bool is_string = false;
  std::string text;  // string literal contents, without quotes
  Expr expr;

  friend bool operator==(const PrintArg&, const PrintArg&) = default;
};

struct Stmt {
  enum class Kind { kDecl, kInput, kAssign, kPrint, kIf, kSkip };

  Kind kind = Kind::kSkip;
  int line = 0;
  std::vector<std::string> names;  // kDecl, kInput
  std::string target;              // kAssign
  Expr value;                      // kAssign value, kIf condition
  std::vector<PrintArg> args;      // kPrint
  std::vector<Stmt> then_branch;   // kIf: exactly one statement
  std::vector<Stmt> else_branch;   // kIf: zero or one statement
  // Line of a standalone `else`; 0 when there is no else or the else shares
  // its line with a nested `if` (an `else if`).
  int else_line = 0;

  friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct Program {
  std::vector<Stmt> body;

  // Every line that carries a statement unit (statement or standalone
  // `else`), ascending.
  std::vector<int> UnitLines() const;

  // Names that are declared, read by `input`, or assigned, in first-seen
  // order.
  std::vector<std::string> Variables() const;

  friend bool operator==(const Program&, const Program&) = default;
};

// Throws Error(kLexError) / Error(kParseError) with a line number.
Program Parse(std::string_view source);

// Canonical one-line text of the unit on `line` (no indentation, no comment).
// For an `else if` line this is "else if (...)".
std::string FormatUnit(const Program& program, int line);

// The whole program in canonical form, one unit per line, indented two
// spaces per nesting level so that Parse() reads back the same structure.
// Line numbers of the returned text are 1..UnitLines().size().
std::string FormatProgram(const Program& program);

std::string FormatExpr(const Expr& e);

struct ExecutionResult {
  std::string output;
  std::vector<int> covered_lines;  // ascending, unique
  bool runtime_error = false;      // division by zero
};

// Reads `input` statements from `inputs` in order (missing values read as 0).
// Integer arithmetic wraps; division or modulo by zero stops execution and
// is reported in the output.
ExecutionResult Execute(const Program& program, const std::vector<std::int64_t>& inputs);

enum class MutationOperator {
  kRelational,        // relational operator replacement
  kArithmetic,        // arithmetic operator replacement
  kLogical,           // && <-> ||
  kVariable,          // variable reference replacement
  kConstant,          // integer constant +1 / -1
  kStatementDeletion, // assignment replaced by a no-op
};

std::string_view MutationOperatorName(MutationOperator op);
std::optional<MutationOperator> ParseMutationOperator(std::string_view name);

struct Mutation {
  int line;
  MutationOperator op;
  std::string description;
  Program program;
};

// All first-order mutants of the unit on `line`, in a fixed order.
std::vector<Mutation> MutantsAt(const Program& program, int line);

// All first-order mutants of the whole program, ordered by line.
std::vector<Mutation> AllMutants(const Program& program);

}  // namespace faultfuse::toy

#endif  // FAULTFUSE_TOY_LANG_HPP_
