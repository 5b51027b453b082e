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
#include <functional>
#include <map>
#include <set>
#include <string>

#include "faultfuse/error.hpp"
#include "faultfuse/toy_lang.hpp"

namespace faultfuse::toy {
namespace {

constexpr std::string_view kModule = "static_analysis";

int BinaryPrecedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  if (op == "*" || op == "/" || op == "%") return 6;
  return 0;
}

constexpr int kUnaryPrecedence = 7;

bool IsQuote(std::string_view lexeme) {
  return lexeme == "\"" || lexeme == "\xE2\x80\x9C" || lexeme == "\xE2\x80\x9D";
}
constexpr int kAtomPrecedence = 8;

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    for (const Token& t : tokens_) indent_.try_emplace(t.line, t.column);
  }

  Program ParseProgram() {
    Program p;
    while (!AtEnd()) p.body.push_back(ParseStatement());
    return p;
  }

 private:
  bool AtEnd() const { return pos_ >= tokens_.size(); }

  const Token& Peek() const { return tokens_[pos_]; }

  bool PeekIs(std::string_view lexeme) const {
    return !AtEnd() && Peek().lexeme == lexeme &&
           (Peek().kind == TokenKind::kSymbol || Peek().kind == TokenKind::kKeyword);
  }

  int LastLine() const { return tokens_.empty() ? 1 : tokens_.back().line; }

  [[noreturn]] void Fail(int line, const std::string& what) const {
    throw Error(ErrorCode::kParseError, kModule, "line " + std::to_string(line) + ": " + what);
  }

  // Consumes the next token, which must sit on the current statement's line.
  const Token& Next(std::string_view context) {
    if (AtEnd()) Fail(LastLine(), "unexpected end of input in " + std::string(context));
    const Token& t = tokens_[pos_];
    if (t.line != stmt_line_) {
      Fail(stmt_line_, std::string(context) + " continues past the end of its line");
    }
    ++pos_;
    return t;
  }

  void Expect(std::string_view lexeme, std::string_view context) {
    const Token& t = Next(context);
    if (t.lexeme != lexeme || t.kind == TokenKind::kStringFragment) {
      Fail(t.line, "expected '" + std::string(lexeme) + "' in " + std::string(context) +
                       ", found '" + t.lexeme + "'");
    }
  }

  void ClaimLine(int line) {
    if (!claimed_.insert(line).second) Fail(line, "more than one statement on a line");
  }

  Stmt ParseStatement() {
    const Token& first = Peek();
    ClaimLine(first.line);
    stmt_line_ = first.line;
    if (first.kind == TokenKind::kKeyword) {
      if (first.lexeme == "int" || first.lexeme == "input") return ParseNameList();
      if (first.lexeme == "print") return ParsePrint();
      if (first.lexeme == "if") return ParseIf();
      if (first.lexeme == "else") Fail(first.line, "'else' without matching 'if'");
    }
    if (first.kind == TokenKind::kIdentifier) return ParseAssign();
    Fail(first.line, "unexpected '" + first.lexeme + "' at start of statement");
  }

  Stmt ParseNameList() {
    Stmt s;
    const Token& kw = Next("declaration");
    s.kind = kw.lexeme == "int" ? Stmt::Kind::kDecl : Stmt::Kind::kInput;
    s.line = kw.line;
    while (true) {
      const Token& name = Next("name list");
      if (name.kind != TokenKind::kIdentifier) Fail(name.line, "expected a variable name");
      s.names.push_back(name.lexeme);
      if (PeekIs(",") && Peek().line == stmt_line_) {
        ++pos_;
        continue;
      }
      break;
    }
    Expect(";", "name list");
    return s;
  }

  Stmt ParsePrint() {
    Stmt s;
    s.kind = Stmt::Kind::kPrint;
    s.line = Next("print").line;
    Expect("(", "print");
    if (!PeekIs(")")) {
      while (true) {
        PrintArg arg;
        if (!AtEnd() && Peek().kind == TokenKind::kSymbol && IsQuote(Peek().lexeme)) {
          ++pos_;
          arg.is_string = true;
          while (true) {
            const Token& t = Next("string literal");
            if (t.kind == TokenKind::kSymbol && IsQuote(t.lexeme)) break;
            arg.text += t.lexeme;
          }
        } else {
          arg.expr = ParseExpr(1);
        }
        s.args.push_back(std::move(arg));
        if (PeekIs(",")) {
          Next("print");
          continue;
        }
        break;
      }
    }
    Expect(")", "print");
    Expect(";", "print");
    return s;
  }

  Stmt ParseAssign() {
    Stmt s;
    s.kind = Stmt::Kind::kAssign;
    const Token& target = Next("assignment");
    s.line = target.line;
    s.target = target.lexeme;
    Expect("=", "assignment");
    s.value = ParseExpr(1);
    Expect(";", "assignment");
    return s;
  }

  // The 'if' keyword is the next token and its line is already claimed.
  Stmt ParseIf() {
    Stmt s;
    s.kind = Stmt::Kind::kIf;
    stmt_line_ = Peek().line;
    s.line = Next("if").line;
    Expect("(", "if condition");
    s.value = ParseExpr(1);
    Expect(")", "if condition");
    const int indent = indent_.at(s.line);
    open_ifs_.push_back(indent);
    s.then_branch.push_back(ParseArm(s.line, "if"));
    open_ifs_.pop_back();
    if (PeekIs("else") && TakesElse(indent, indent_.at(Peek().line))) {
      const int else_line = Peek().line;
      ClaimLine(else_line);
      ++pos_;
      if (!AtEnd() && Peek().line == else_line) {
        if (!PeekIs("if")) Fail(else_line, "statement after 'else' must start on its own line");
        s.else_branch.push_back(ParseIf());
      } else {
        s.else_line = else_line;
        s.else_branch.push_back(ParseArm(else_line, "else"));
      }
    }
    return s;
  }

  // An `else` goes to the nearest open `if` on its indentation; with no such
  // `if` the innermost one takes it.
  bool TakesElse(int if_indent, int else_indent) const {
    if (if_indent == else_indent) return true;
    return std::find(open_ifs_.begin(), open_ifs_.end(), else_indent) == open_ifs_.end();
  }

  Stmt ParseArm(int header_line, std::string_view header) {
    if (AtEnd()) Fail(header_line, "missing statement after '" + std::string(header) + "'");
    if (Peek().line == header_line) {
      Fail(header_line, "statement after '" + std::string(header) + "' must start on its own line");
    }
    return ParseStatement();
  }

  Expr ParseExpr(int min_prec) {
    Expr lhs = ParseUnary();
    while (!AtEnd() && Peek().kind == TokenKind::kSymbol && Peek().line == stmt_line_) {
      const int prec = BinaryPrecedence(Peek().lexeme);
      if (prec == 0 || prec < min_prec) break;
      std::string op = Next("expression").lexeme;
      Expr rhs = ParseExpr(prec + 1);
      lhs = Expr::Binary(std::move(op), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr ParseUnary() {
    if (PeekIs("-") || PeekIs("!")) {
      std::string op = Next("expression").lexeme;
      return Expr::Unary(std::move(op), ParseUnary());
    }
    return ParsePrimary();
  }

  Expr ParsePrimary() {
    const Token& t = Next("expression");
    switch (t.kind) {
      case TokenKind::kLiteral:
        try {
          return Expr::Number(std::stoll(t.lexeme));
        } catch (const std::out_of_range&) {
          Fail(t.line, "integer literal out of range");
        }
      case TokenKind::kIdentifier:
        return Expr::Variable(t.lexeme);
      case TokenKind::kSymbol:
        if (t.lexeme == "(") {
          Expr e = ParseExpr(1);
          Expect(")", "parenthesized expression");
          return e;
        }
        break;
      default:
        break;
    }
    Fail(t.line, "unexpected '" + t.lexeme + "' in expression");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int stmt_line_ = 0;
  std::set<int> claimed_;
  std::map<int, int> indent_;   // line -> column of its first token
  std::vector<int> open_ifs_;   // indentation of ifs still parsing their then-arm
};

void CollectUnitLines(const std::vector<Stmt>& stmts, std::vector<int>& out) {
  for (const Stmt& s : stmts) {
    out.push_back(s.line);
    if (s.kind == Stmt::Kind::kIf) {
      CollectUnitLines(s.then_branch, out);
      if (s.else_line != 0) out.push_back(s.else_line);
      CollectUnitLines(s.else_branch, out);
    }
  }
}

void AddName(std::vector<std::string>& names, const std::string& n) {
  if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
}

void CollectVariables(const std::vector<Stmt>& stmts, std::vector<std::string>& out) {
  for (const Stmt& s : stmts) {
    switch (s.kind) {
      case Stmt::Kind::kDecl:
      case Stmt::Kind::kInput:
        for (const auto& n : s.names) AddName(out, n);
        break;
      case Stmt::Kind::kAssign:
        AddName(out, s.target);
        break;
      case Stmt::Kind::kIf:
        CollectVariables(s.then_branch, out);
        CollectVariables(s.else_branch, out);
        break;
      default:
        break;
    }
  }
}

int ExprPrecedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kNumber:
      return e.value < 0 ? kUnaryPrecedence : kAtomPrecedence;
    case Expr::Kind::kVariable:
      return kAtomPrecedence;
    case Expr::Kind::kUnary:
      return kUnaryPrecedence;
    case Expr::Kind::kBinary:
      return BinaryPrecedence(e.name);
  }
  return kAtomPrecedence;
}

std::string Wrap(const Expr& e, bool parens) {
  return parens ? "(" + FormatExpr(e) + ")" : FormatExpr(e);
}

// Finds the unit on `line`. `else_if` is set when the statement is the
// nested `if` of an `else if`.
struct UnitRef {
  const Stmt* stmt = nullptr;
  bool is_else_keyword = false;
  bool is_else_if = false;
};

bool FindUnit(const std::vector<Stmt>& stmts, int line, bool parent_else_if, UnitRef& ref) {
  for (const Stmt& s : stmts) {
    if (s.line == line) {
      ref = {&s, false, parent_else_if};
      return true;
    }
    if (s.kind != Stmt::Kind::kIf) continue;
    if (s.else_line == line) {
      ref = {&s, true, false};
      return true;
    }
    if (FindUnit(s.then_branch, line, false, ref)) return true;
    if (FindUnit(s.else_branch, line, s.else_line == 0, ref)) return true;
  }
  return false;
}

std::string FormatStmtHeader(const Stmt& s) {
  std::string out;
  switch (s.kind) {
    case Stmt::Kind::kDecl:
    case Stmt::Kind::kInput:
      out = s.kind == Stmt::Kind::kDecl ? "int " : "input ";
      for (std::size_t i = 0; i < s.names.size(); ++i) {
        if (i) out += ", ";
        out += s.names[i];
      }
      return out + ";";
    case Stmt::Kind::kAssign:
      return s.target + " = " + FormatExpr(s.value) + ";";
    case Stmt::Kind::kPrint:
      out = "print(";
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) out += ", ";
        out += s.args[i].is_string ? "\"" + s.args[i].text + "\"" : FormatExpr(s.args[i].expr);
      }
      return out + ");";
    case Stmt::Kind::kIf:
      return "if (" + FormatExpr(s.value) + ")";
    case Stmt::Kind::kSkip:
      return ";";
  }
  return out;
}

}  // namespace

Expr Expr::Number(std::int64_t v) {
  Expr e;
  e.kind = Kind::kNumber;
  e.value = v;
  return e;
}

Expr Expr::Variable(std::string n) {
  Expr e;
  e.kind = Kind::kVariable;
  e.name = std::move(n);
  return e;
}

Expr Expr::Unary(std::string op, Expr operand) {
  Expr e;
  e.kind = Kind::kUnary;
  e.name = std::move(op);
  e.operands.push_back(std::move(operand));
  return e;
}

Expr Expr::Binary(std::string op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::kBinary;
  e.name = std::move(op);
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  return e;
}

std::vector<int> Program::UnitLines() const {
  std::vector<int> out;
  CollectUnitLines(body, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Program::Variables() const {
  std::vector<std::string> out;
  CollectVariables(body, out);
  return out;
}

Program Parse(std::string_view source) { return Parser(Tokenize(source)).ParseProgram(); }

std::string FormatExpr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kNumber:
      return std::to_string(e.value);
    case Expr::Kind::kVariable:
      return e.name;
    case Expr::Kind::kUnary: {
      const Expr& x = e.operands[0];
      return e.name + Wrap(x, ExprPrecedence(x) < kUnaryPrecedence);
    }
    case Expr::Kind::kBinary: {
      const int p = BinaryPrecedence(e.name);
      const Expr& l = e.operands[0];
      const Expr& r = e.operands[1];
      return Wrap(l, ExprPrecedence(l) < p) + " " + e.name + " " + Wrap(r, ExprPrecedence(r) <= p);
    }
  }
  return {};
}

std::string FormatUnit(const Program& program, int line) {
  UnitRef ref;
  if (!FindUnit(program.body, line, false, ref)) {
    throw Error(ErrorCode::kDanglingReference, kModule,
                "no statement on line " + std::to_string(line));
  }
  if (ref.is_else_keyword) return "else";
  std::string text = FormatStmtHeader(*ref.stmt);
  return ref.is_else_if ? "else " + text : text;
}

std::string FormatProgram(const Program& program) {
  std::map<int, int> depth;
  std::function<void(const std::vector<Stmt>&, int)> walk = [&](const std::vector<Stmt>& stmts,
                                                                int d) {
    for (const Stmt& s : stmts) {
      depth.try_emplace(s.line, d);
      if (s.kind != Stmt::Kind::kIf) continue;
      walk(s.then_branch, d + 1);
      if (s.else_line != 0) {
        depth[s.else_line] = d;
        walk(s.else_branch, d + 1);
      } else {
        walk(s.else_branch, d);
      }
    }
  };
  walk(program.body, 0);
  std::string out;
  for (const auto& [line, d] : depth) {
    out.append(static_cast<std::size_t>(2 * d), ' ');
    out += FormatUnit(program, line);
    out += '\n';
  }
  return out;
}

}  // namespace faultfuse::toy
