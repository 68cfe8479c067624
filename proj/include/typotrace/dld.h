// Copyright 2026 The Typotrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TYPOTRACE_DLD_H_
#define TYPOTRACE_DLD_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace typotrace {

// Optimal string alignment distance: unit-cost insertion, deletion,
// substitution and adjacent transposition, with no substring edited more
// than once. Not a metric; e.g. ("ca", "abc") is 3 where unrestricted
// Damerau-Levenshtein gives 2.
int OsaDistance(std::string_view a, std::string_view b);

int LevenshteinDistance(std::string_view a, std::string_view b);

struct BaselineResult {
  bool flagged = false;
  std::string match;  // nearest checking-list entry, lowest index on ties
  std::size_t match_index = 0;
  int distance = 0;
};

// Flags the candidate iff 0 < min distance <= threshold. Exact members of the
// list are not flagged.
BaselineResult BaselineClassify(std::string_view candidate,
                                std::span<const std::string> checking_list,
                                int threshold = 1);

}  // namespace typotrace

#endif  // TYPOTRACE_DLD_H_
