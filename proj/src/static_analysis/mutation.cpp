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

#include <array>
#include <string>

#include "faultfuse/toy_lang.hpp"

namespace faultfuse::toy {
namespace {

constexpr std::array<std::string_view, 6> kRelational = {"<", "<=", ">", ">=", "==", "!="};
constexpr std::array<std::string_view, 5> kArithmetic = {"+", "-", "*", "/", "%"};

template <std::size_t N>
bool Contains(const std::array<std::string_view, N>& set, std::string_view op) {
  for (std::string_view s : set) {
    if (s == op) return true;
  }
  return false;
}

Stmt* FindStmt(std::vector<Stmt>& stmts, int line) {
  for (Stmt& s : stmts) {
    if (s.line == line) return &s;
    if (s.kind == Stmt::Kind::kIf) {
      if (Stmt* t = FindStmt(s.then_branch, line)) return t;
      if (Stmt* t = FindStmt(s.else_branch, line)) return t;
    }
  }
  return nullptr;
}

// Expressions owned by a unit: the assignment value, the if condition, or
// the print arguments.
std::vector<Expr*> UnitExprs(Stmt& s) {
  std::vector<Expr*> out;
  switch (s.kind) {
    case Stmt::Kind::kAssign:
    case Stmt::Kind::kIf:
      out.push_back(&s.value);
      break;
    case Stmt::Kind::kPrint:
      for (PrintArg& a : s.args) {
        if (!a.is_string) out.push_back(&a.expr);
      }
      break;
    default:
      break;
  }
  return out;
}

// A node address: which unit expression, then child indices.
struct NodePath {
  std::size_t root;
  std::vector<std::size_t> steps;
};

void CollectPaths(const Expr& e, NodePath path, std::vector<NodePath>& out) {
  out.push_back(path);
  for (std::size_t i = 0; i < e.operands.size(); ++i) {
    NodePath child = path;
    child.steps.push_back(i);
    CollectPaths(e.operands[i], child, out);
  }
}

Expr& Resolve(Stmt& s, const NodePath& p) {
  Expr* e = UnitExprs(s)[p.root];
  for (std::size_t i : p.steps) e = &e->operands[i];
  return *e;
}

}  // namespace

std::string_view MutationOperatorName(MutationOperator op) {
  switch (op) {
    case MutationOperator::kRelational: return "relational-op-flip";
    case MutationOperator::kArithmetic: return "arith-op-flip";
    case MutationOperator::kLogical: return "logical-op-flip";
    case MutationOperator::kVariable: return "variable-replace";
    case MutationOperator::kConstant: return "constant-shift";
    case MutationOperator::kStatementDeletion: return "statement-deletion";
  }
  return "unknown";
}

std::optional<MutationOperator> ParseMutationOperator(std::string_view name) {
  for (MutationOperator op :
       {MutationOperator::kRelational, MutationOperator::kArithmetic, MutationOperator::kLogical,
        MutationOperator::kVariable, MutationOperator::kConstant,
        MutationOperator::kStatementDeletion}) {
    if (MutationOperatorName(op) == name) return op;
  }
  return std::nullopt;
}

std::vector<Mutation> MutantsAt(const Program& program, int line) {
  std::vector<Mutation> out;
  Program scratch = program;
  Stmt* unit = FindStmt(scratch.body, line);
  if (unit == nullptr) return out;

  const std::string before = FormatUnit(program, line);
  const std::vector<std::string> variables = program.Variables();

  auto emit = [&](MutationOperator op, Program mutated) {
    std::string after = FormatUnit(mutated, line);
    out.push_back({line, op, before + " => " + after, std::move(mutated)});
  };

  std::vector<NodePath> paths;
  const std::vector<Expr*> roots = UnitExprs(*unit);
  for (std::size_t r = 0; r < roots.size(); ++r) CollectPaths(*roots[r], {r, {}}, paths);

  for (const NodePath& path : paths) {
    const Expr& node = Resolve(*unit, path);
    auto mutate = [&](MutationOperator op, auto&& edit) {
      Program m = program;
      edit(Resolve(*FindStmt(m.body, line), path));
      emit(op, std::move(m));
    };
    switch (node.kind) {
      case Expr::Kind::kBinary:
        if (Contains(kRelational, node.name)) {
          for (std::string_view alt : kRelational) {
            if (alt == node.name) continue;
            mutate(MutationOperator::kRelational, [&](Expr& e) { e.name = std::string(alt); });
          }
        } else if (Contains(kArithmetic, node.name)) {
          for (std::string_view alt : kArithmetic) {
            if (alt == node.name) continue;
            mutate(MutationOperator::kArithmetic, [&](Expr& e) { e.name = std::string(alt); });
          }
        } else {
          const std::string alt = node.name == "&&" ? "||" : "&&";
          mutate(MutationOperator::kLogical, [&](Expr& e) { e.name = alt; });
        }
        break;
      case Expr::Kind::kVariable:
        for (const std::string& v : variables) {
          if (v == node.name) continue;
          mutate(MutationOperator::kVariable, [&](Expr& e) { e.name = v; });
        }
        break;
      case Expr::Kind::kNumber:
        for (std::int64_t delta : {1, -1}) {
          mutate(MutationOperator::kConstant, [&](Expr& e) { e.value += delta; });
        }
        break;
      case Expr::Kind::kUnary:
        break;
    }
  }

  if (unit->kind == Stmt::Kind::kAssign) {
    Program m = program;
    Stmt* s = FindStmt(m.body, line);
    s->kind = Stmt::Kind::kSkip;
    s->value = Expr{};
    s->target.clear();
    emit(MutationOperator::kStatementDeletion, std::move(m));
  }
  return out;
}

std::vector<Mutation> AllMutants(const Program& program) {
  std::vector<Mutation> out;
  for (int line : program.UnitLines()) {
    for (Mutation& m : MutantsAt(program, line)) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace faultfuse::toy
