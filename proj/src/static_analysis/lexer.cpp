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
#include <cctype>
#include <string>

#include "faultfuse/error.hpp"
#include "faultfuse/toy_lang.hpp"

namespace faultfuse::toy {
namespace {

constexpr std::string_view kModule = "static_analysis";

constexpr std::array<std::string_view, 5> kReserved = {"int", "input", "if", "else", "print"};

constexpr std::array<std::string_view, 6> kTwoCharOps = {"<=", ">=", "==", "!=", "&&", "||"};

constexpr std::string_view kOneCharOps = "+-*/%<>=(),;!";

// Typographic double quotes, as they appear in copied listings.
constexpr std::string_view kLeftQuote = "\xE2\x80\x9C";
constexpr std::string_view kRightQuote = "\xE2\x80\x9D";

bool IsIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool IsIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Length of a quote character at `pos`, or 0.
std::size_t QuoteAt(std::string_view s, std::size_t pos) {
  if (s[pos] == '"') return 1;
  if (s.substr(pos, 3) == kLeftQuote || s.substr(pos, 3) == kRightQuote) return 3;
  return 0;
}

[[noreturn]] void Fail(int line, const std::string& what) {
  throw Error(ErrorCode::kLexError, kModule, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

bool IsReservedWord(std::string_view word) {
  for (std::string_view r : kReserved) {
    if (r == word) return true;
  }
  return false;
}

std::vector<Token> Tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto Col = [&line_start](std::size_t at) { return static_cast<int>(at - line_start); };
  while (i < n) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (IsIdentStart(c)) {
      std::size_t j = i;
      while (j < n && IsIdentChar(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      const TokenKind kind = IsReservedWord(word) ? TokenKind::kKeyword : TokenKind::kIdentifier;
      out.push_back({kind, std::move(word), line, Col(i)});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < n && IsIdentStart(src[j])) Fail(line, "malformed number");
      out.push_back({TokenKind::kLiteral, std::string(src.substr(i, j - i)), line, Col(i)});
      i = j;
      continue;
    }
    if (std::size_t q = QuoteAt(src, i); q != 0) {
      out.push_back({TokenKind::kSymbol, std::string(src.substr(i, q)), line, Col(i)});
      i += q;
      bool closed = false;
      while (i < n && src[i] != '\n') {
        if (std::size_t cq = QuoteAt(src, i); cq != 0) {
          out.push_back({TokenKind::kSymbol, std::string(src.substr(i, cq)), line, Col(i)});
          i += cq;
          closed = true;
          break;
        }
        const unsigned char sc = static_cast<unsigned char>(src[i]);
        if (std::isspace(sc)) {
          ++i;
        } else if (std::isalnum(sc) || sc >= 0x80) {
          std::size_t j = i;
          while (j < n && QuoteAt(src, j) == 0) {
            const unsigned char fc = static_cast<unsigned char>(src[j]);
            if (!(std::isalnum(fc) || fc >= 0x80)) break;
            ++j;
          }
          out.push_back({TokenKind::kStringFragment, std::string(src.substr(i, j - i)), line, Col(i)});
          i = j;
        } else {
          out.push_back({TokenKind::kSymbol, std::string(1, src[i]), line, Col(i)});
          ++i;
        }
      }
      if (!closed) Fail(line, "unterminated string literal");
      continue;
    }
    bool matched = false;
    if (i + 1 < n) {
      for (std::string_view op : kTwoCharOps) {
        if (src.substr(i, 2) == op) {
          out.push_back({TokenKind::kSymbol, std::string(op), line, Col(i)});
          i += 2;
          matched = true;
          break;
        }
      }
    }
    if (matched) continue;
    if (kOneCharOps.find(c) != std::string_view::npos) {
      out.push_back({TokenKind::kSymbol, std::string(1, c), line, Col(i)});
      ++i;
      continue;
    }
    Fail(line, std::string("illegal character '") + c + "'");
  }
  return out;
}

}  // namespace faultfuse::toy
