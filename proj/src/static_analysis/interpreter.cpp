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
#include <limits>
#include <map>
#include <string>

#include "faultfuse/toy_lang.hpp"

namespace faultfuse::toy {
namespace {

struct DivisionByZero {};

std::int64_t Wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

class Interpreter {
 public:
  explicit Interpreter(const std::vector<std::int64_t>& inputs) : inputs_(inputs) {}

  void Run(const std::vector<Stmt>& stmts) {
    for (const Stmt& s : stmts) Exec(s);
  }

  ExecutionResult Finish(bool error) {
    ExecutionResult r;
    r.output = std::move(output_);
    if (error) r.output += "<division by zero>\n";
    r.runtime_error = error;
    std::sort(covered_.begin(), covered_.end());
    covered_.erase(std::unique(covered_.begin(), covered_.end()), covered_.end());
    r.covered_lines = std::move(covered_);
    return r;
  }

 private:
  void Exec(const Stmt& s) {
    covered_.push_back(s.line);
    switch (s.kind) {
      case Stmt::Kind::kDecl:
        for (const auto& n : s.names) vars_[n] = 0;
        break;
      case Stmt::Kind::kInput:
        for (const auto& n : s.names) {
          vars_[n] = next_input_ < inputs_.size() ? inputs_[next_input_] : 0;
          ++next_input_;
        }
        break;
      case Stmt::Kind::kAssign:
        vars_[s.target] = Eval(s.value);
        break;
      case Stmt::Kind::kPrint: {
        std::string line;
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          if (i) line += ' ';
          line += s.args[i].is_string ? s.args[i].text : std::to_string(Eval(s.args[i].expr));
        }
        output_ += line;
        output_ += '\n';
        break;
      }
      case Stmt::Kind::kIf:
        if (Eval(s.value) != 0) {
          Run(s.then_branch);
        } else if (!s.else_branch.empty()) {
          if (s.else_line != 0) covered_.push_back(s.else_line);
          Run(s.else_branch);
        }
        break;
      case Stmt::Kind::kSkip:
        break;
    }
  }

  std::int64_t Eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::kNumber:
        return e.value;
      case Expr::Kind::kVariable: {
        auto it = vars_.find(e.name);
        return it == vars_.end() ? 0 : it->second;
      }
      case Expr::Kind::kUnary: {
        const std::int64_t v = Eval(e.operands[0]);
        if (e.name == "-") return Wrap(0ULL - static_cast<std::uint64_t>(v));
        return v == 0 ? 1 : 0;
      }
      case Expr::Kind::kBinary:
        return EvalBinary(e);
    }
    return 0;
  }

  std::int64_t EvalBinary(const Expr& e) {
    const std::string& op = e.name;
    if (op == "&&") return Eval(e.operands[0]) != 0 && Eval(e.operands[1]) != 0;
    if (op == "||") return Eval(e.operands[0]) != 0 || Eval(e.operands[1]) != 0;
    const std::int64_t a = Eval(e.operands[0]);
    const std::int64_t b = Eval(e.operands[1]);
    const auto ua = static_cast<std::uint64_t>(a);
    const auto ub = static_cast<std::uint64_t>(b);
    if (op == "+") return Wrap(ua + ub);
    if (op == "-") return Wrap(ua - ub);
    if (op == "*") return Wrap(ua * ub);
    if (op == "/" || op == "%") {
      if (b == 0) throw DivisionByZero{};
      if (b == -1) return op == "/" ? Wrap(0ULL - ua) : 0;
      return op == "/" ? a / b : a % b;
    }
    if (op == "<") return a < b;
    if (op == "<=") return a <= b;
    if (op == ">") return a > b;
    if (op == ">=") return a >= b;
    if (op == "==") return a == b;
    if (op == "!=") return a != b;
    return 0;
  }

  const std::vector<std::int64_t>& inputs_;
  std::size_t next_input_ = 0;
  std::map<std::string, std::int64_t> vars_;
  std::string output_;
  std::vector<int> covered_;
};

}  // namespace

ExecutionResult Execute(const Program& program, const std::vector<std::int64_t>& inputs) {
  Interpreter interp(inputs);
  try {
    interp.Run(program.body);
  } catch (const DivisionByZero&) {
    return interp.Finish(true);
  }
  return interp.Finish(false);
}

}  // namespace faultfuse::toy
