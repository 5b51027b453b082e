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
#include <map>
#include <string>

#include "faultfuse/corpus.hpp"
#include "faultfuse/error.hpp"
#include "faultfuse/random.hpp"

namespace faultfuse::corpus {
namespace {

constexpr std::string_view kModule = "corpus";

// How many input batches are drawn for one candidate corruption before the
// next candidate is tried.
constexpr int kInputRetries = 4;

struct InputDomain {
  int arity;
  std::int64_t lo;
  std::int64_t hi;
};

constexpr std::string_view kMedian3 =
    "input x, y, z;\n"
    "m = z;\n"
    "if (y < z)\n"
    "  if (x < y)\n"
    "    m = y;\n"
    "  else if (x < z)\n"
    "    m = x;\n"
    "else\n"
    "  if (x > y)\n"
    "    m = y;\n"
    "  else if (x > z)\n"
    "    m = x;\n"
    "print(m);\n";

constexpr std::string_view kTriangle =
    "input a, b, c;\n"
    "t = 0;\n"
    "if (a + b > c)\n"
    "  if (a + c > b)\n"
    "    if (b + c > a)\n"
    "      if (a == b)\n"
    "        if (b == c)\n"
    "          t = 3;\n"
    "        else\n"
    "          t = 2;\n"
    "      else if (b == c)\n"
    "        t = 2;\n"
    "      else if (a == c)\n"
    "        t = 2;\n"
    "      else\n"
    "        t = 1;\n"
    "print(t);\n";

int MaxArrayLength(int statements) { return statements <= 0 ? 6 : std::max(2, (statements - 1) / 2); }

std::string MaxArraySource(int n) {
  std::string src = "input ";
  for (int i = 0; i < n; ++i) src += (i ? ", a" : "a") + std::to_string(i);
  src += ";\nm = a0;\n";
  for (int i = 1; i < n; ++i) {
    const std::string a = "a" + std::to_string(i);
    src += "if (" + a + " > m)\n  m = " + a + ";\n";
  }
  src += "print(m);\n";
  return src;
}

InputDomain DomainFor(const std::string& name, int statements) {
  if (name == "median3") return {3, 0, 9};
  if (name == "triangle") return {3, 1, 6};
  return {MaxArrayLength(statements), 0, 20};
}

std::vector<std::vector<std::int64_t>> DrawInputs(const InputDomain& dom, int count, Rng& rng) {
  std::vector<std::vector<std::int64_t>> inputs(static_cast<std::size_t>(count));
  const auto span = static_cast<std::size_t>(dom.hi - dom.lo + 1);
  for (auto& in : inputs) {
    in.resize(static_cast<std::size_t>(dom.arity));
    for (auto& v : in) v = dom.lo + static_cast<std::int64_t>(rng.Index(span));
  }
  return inputs;
}

std::vector<std::string> SplitLines(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t nl = s.find('\n', start);
    out.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

}  // namespace

std::vector<std::string> TemplateNames() { return {"median3", "triangle", "maxarray"}; }

std::string TemplateSource(const std::string& name, int statements) {
  if (name == "median3") return std::string(kMedian3);
  if (name == "triangle") return std::string(kTriangle);
  if (name == "maxarray") return MaxArraySource(MaxArrayLength(statements));
  throw Error(ErrorCode::kConfigError, kModule, "unknown template '" + name + "'");
}

FaultDataset GenerateSynthetic(const SyntheticSpec& spec) {
  const std::string source = TemplateSource(spec.template_name, spec.statements);
  if (spec.statements != 0 && spec.statements < 5) {
    throw Error(ErrorCode::kConfigError, kModule, "a program needs at least 5 statements");
  }
  if (spec.tests < 4) throw Error(ErrorCode::kConfigError, kModule, "at least 4 tests are required");

  const toy::Program correct = toy::Parse(source);
  const std::vector<int> lines = correct.UnitLines();
  if (spec.fault_statement &&
      (*spec.fault_statement < 0 || static_cast<std::size_t>(*spec.fault_statement) >= lines.size())) {
    throw Error(ErrorCode::kConfigError, kModule,
                "fault statement " + std::to_string(*spec.fault_statement) + " out of range");
  }

  // Candidate corruptions in a seed-determined order.
  std::vector<toy::Mutation> candidates;
  for (int line : lines) {
    if (spec.fault_statement && line != lines[static_cast<std::size_t>(*spec.fault_statement)]) continue;
    for (toy::Mutation& m : toy::MutantsAt(correct, line)) {
      if (spec.fault_rule && m.op != *spec.fault_rule) continue;
      candidates.push_back(std::move(m));
    }
  }
  Rng rng = Rng::Derive(spec.seed, {0x5e17, static_cast<std::uint64_t>(spec.tests)});
  rng.Shuffle(candidates);

  const InputDomain domain = DomainFor(spec.template_name, spec.statements);
  for (const toy::Mutation& fault : candidates) {
    for (int attempt = 0; attempt < kInputRetries; ++attempt) {
      const auto inputs = DrawInputs(domain, spec.tests, rng);
      std::vector<toy::ExecutionResult> runs;
      std::vector<bool> fails;
      std::size_t failing = 0;
      for (const auto& in : inputs) {
        runs.push_back(toy::Execute(fault.program, in));
        fails.push_back(runs.back().output != toy::Execute(correct, in).output);
        failing += fails.back();
      }
      if (failing == 0 || failing == inputs.size()) continue;

      FaultDataset d;
      d.name = spec.template_name + "-s" + std::to_string(spec.seed);
      const std::vector<std::string> text = SplitLines(toy::FormatProgram(fault.program));
      std::map<int, int> id_of_line;
      for (std::size_t i = 0; i < lines.size(); ++i) {
        id_of_line[lines[i]] = static_cast<int>(i);
        d.statements.push_back({static_cast<int>(i), spec.template_name + ".c", lines[i], text[i]});
      }
      d.coverage.assign(inputs.size() * lines.size(), 0);
      for (std::size_t t = 0; t < inputs.size(); ++t) {
        d.test_ids.push_back("t" + std::to_string(t));
        d.outcomes.push_back(fails[t] ? Verdict::kFail : Verdict::kPass);
        for (int line : runs[t].covered_lines) {
          d.coverage[t * lines.size() + static_cast<std::size_t>(id_of_line.at(line))] = 1;
        }
      }
      int next_mutant = 0;
      for (const toy::Mutation& m : toy::AllMutants(fault.program)) {
        Mutant mu;
        mu.id = "m" + std::to_string(next_mutant++);
        mu.statement = id_of_line.at(m.line);
        for (std::size_t t = 0; t < inputs.size(); ++t) {
          mu.kills.push_back(toy::Execute(m.program, inputs[t]).output != runs[t].output);
        }
        d.mutants.push_back(std::move(mu));
      }
      d.faults.push_back(id_of_line.at(fault.line));
      d.Validate();
      return d;
    }
  }
  throw Error(ErrorCode::kInfeasibleSpec, kModule,
              "no corruption of template '" + spec.template_name +
                  "' produced both failing and passing tests");
}

}  // namespace faultfuse::corpus
