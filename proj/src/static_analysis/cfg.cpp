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

#include "faultfuse/static_analysis.hpp"

namespace faultfuse::static_analysis {
namespace {

using toy::Stmt;

class CfgBuilder {
 public:
  Cfg Build(const toy::Program& program) {
    const int entry = NewBlock();
    const int last = Emit(program.body, entry);
    cfg_.entry = entry;
    cfg_.exit = last;
    return std::move(cfg_);
  }

 private:
  int NewBlock() {
    cfg_.blocks.emplace_back();
    return static_cast<int>(cfg_.blocks.size()) - 1;
  }

  void Edge(int from, int to) { cfg_.blocks[from].successors.push_back(to); }

  // Appends `stmts` starting in block `current`; returns the open block at
  // the end of the sequence.
  int Emit(const std::vector<Stmt>& stmts, int current) {
    for (const Stmt& s : stmts) {
      cfg_.blocks[current].lines.push_back(s.line);
      if (s.kind != Stmt::Kind::kIf) continue;

      cfg_.blocks[current].conditional = true;
      const int then_block = NewBlock();
      Edge(current, then_block);
      const int then_end = Emit(s.then_branch, then_block);

      int else_end = current;
      int else_block = -1;
      if (!s.else_branch.empty()) {
        else_block = NewBlock();
        Edge(current, else_block);
        if (s.else_line != 0) cfg_.blocks[else_block].lines.push_back(s.else_line);
        else_end = Emit(s.else_branch, else_block);
      }
      const int merge = NewBlock();
      Edge(then_end, merge);
      if (else_block < 0) {
        Edge(current, merge);
      } else {
        Edge(else_end, merge);
      }
      current = merge;
    }
    return current;
  }

  Cfg cfg_;
};

int LeafPaths(const Stmt& s) {
  if (s.kind != Stmt::Kind::kIf) return 1;
  const int then_paths = LeafPaths(s.then_branch.front());
  const int else_paths = s.else_branch.empty() ? 1 : LeafPaths(s.else_branch.front());
  return then_paths + else_paths;
}

int OuterHeaderPaths(const Stmt& s) {
  const int then_paths = LeafPaths(s.then_branch.front());
  const int else_paths = s.else_branch.empty() ? 1 : LeafPaths(s.else_branch.front());
  return std::max(then_paths, else_paths);
}

}  // namespace

int Cfg::BlockOfLine(int line) const {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& ls = blocks[b].lines;
    if (std::find(ls.begin(), ls.end(), line) != ls.end()) return static_cast<int>(b);
  }
  return -1;
}

Cfg BuildCfg(const toy::Program& program) { return CfgBuilder().Build(program); }

Cfg BuildCfg(std::string_view source) { return BuildCfg(toy::Parse(source)); }

std::vector<std::vector<int>> EnumeratePaths(const Cfg& cfg) {
  std::vector<std::vector<int>> paths;
  std::vector<int> stack{cfg.entry};
  std::vector<bool> on_path(cfg.blocks.size(), false);
  on_path[cfg.entry] = true;
  std::function<void(int)> dfs = [&](int b) {
    if (b == cfg.exit) {
      paths.push_back(stack);
      return;
    }
    for (int next : cfg.blocks[b].successors) {
      if (on_path[next]) continue;
      on_path[next] = true;
      stack.push_back(next);
      dfs(next);
      stack.pop_back();
      on_path[next] = false;
    }
  };
  dfs(cfg.entry);
  return paths;
}

std::vector<int> BranchPathCounts(const toy::Program& program) {
  std::vector<std::pair<int, int>> by_line;  // (line, count); 0 = outside
  std::function<void(const std::vector<Stmt>&, int)> walk = [&](const std::vector<Stmt>& stmts,
                                                                int depth) {
    for (const Stmt& s : stmts) {
      if (s.kind != Stmt::Kind::kIf) {
        by_line.emplace_back(s.line, depth == 0 ? 0 : 1);
        continue;
      }
      by_line.emplace_back(s.line, depth == 0 ? OuterHeaderPaths(s) : 2);
      walk(s.then_branch, depth + 1);
      if (s.else_line != 0) by_line.emplace_back(s.else_line, LeafPaths(s.else_branch.front()));
      walk(s.else_branch, depth + 1);
    }
  };
  walk(program.body, 0);

  int outside = 1;
  for (const Stmt& s : program.body) {
    if (s.kind == Stmt::Kind::kIf) outside = std::max(outside, OuterHeaderPaths(s));
  }
  std::sort(by_line.begin(), by_line.end());
  std::vector<int> out;
  out.reserve(by_line.size());
  for (const auto& [line, count] : by_line) out.push_back(count == 0 ? outside : count);
  return out;
}

}  // namespace faultfuse::static_analysis
