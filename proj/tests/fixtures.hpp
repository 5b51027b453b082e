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

#ifndef FAULTFUSE_TESTS_FIXTURES_HPP_
#define FAULTFUSE_TESTS_FIXTURES_HPP_

#include <array>
#include <string_view>

namespace faultfuse::testing {

// The faulty median-of-three listing with its declaration line; line k of the
// text is row k of the expected table below.
inline constexpr std::string_view kMedianListing =
    "int x, y, z, m;\n"
    "input x, y, z;\n"
    "m = z;\n"
    "if (y < z)\n"
    "  if (x < y)\n"
    "    m = y;\n"
    "  else if (x < z)\n"
    "    m = y; //bug\n"
    "else\n"
    "  if (x > y)\n"
    "    m = y;\n"
    "  else if (x > z)\n"
    "    m = x;\n"
    "print(\xE2\x80\x9CMedian:\xE2\x80\x9D, m);\n";

struct StaticRow {
  int branch_paths;
  int variables;
  int symbols;
};

inline constexpr std::array<StaticRow, 14> kMedianStaticRows = {{
    {3, 4, 4},  // int x, y, z, m;
    {3, 3, 3},  // input x, y, z;
    {3, 2, 2},  // m = z;
    {3, 2, 3},  // if (y < z)
    {2, 2, 3},  // if (x < y)
    {1, 2, 2},  // m = y;
    {2, 2, 3},  // else if (x < z)
    {1, 2, 2},  // m = y; //bug
    {3, 0, 0},  // else
    {2, 2, 3},  // if (x > y)
    {1, 2, 2},  // m = y;
    {2, 2, 3},  // else if (x > z)
    {1, 2, 2},  // m = x;
    {3, 1, 7},  // print("Median:", m);
}};

}  // namespace faultfuse::testing

#endif  // FAULTFUSE_TESTS_FIXTURES_HPP_
