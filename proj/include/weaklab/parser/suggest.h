// Copyright 2026 The Weaklab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Incremental predicate autosuggest for the explanation box.

#ifndef WEAKLAB_PARSER_SUGGEST_H_
#define WEAKLAB_PARSER_SUGGEST_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "weaklab/core/logical_form.h"
#include "weaklab/core/types.h"

namespace weaklab {

// Per-project usage counts that bias suggestion ranking. Readers take a
// copy; the service owns the live table.
struct UsageStats {
  std::map<std::string, int> predicates;  // predicate name -> uses
  std::map<std::string, int> phrases;     // phrase text -> uses
  std::map<int, int> integers;

  void Record(const LogicalForm &form);
};

// Completions for text[0, cursor). Each suggestion replaces the partially
// typed trailing word, if any (see ApplySuggestion). Ranked by
//   1. admissibility: completes a clause < advances a clause < opens one,
//   2. usage frequency in `usage`, descending,
//   3. lexicographic.
// Returns an empty list when the prefix already parses.
std::vector<std::string> Suggest(std::string_view text, size_t cursor, TaskKind task,
                                 const UsageStats *usage = nullptr);

inline std::vector<std::string> Suggest(std::string_view prefix, TaskKind task,
                                        const UsageStats *usage = nullptr) {
  return Suggest(prefix, prefix.size(), task, usage);
}

// Replaces the partial trailing word of `prefix` (or closes an open quote)
// with `suggestion`, leaving a trailing space.
std::string ApplySuggestion(std::string_view prefix, std::string_view suggestion);

}  // namespace weaklab

#endif  // WEAKLAB_PARSER_SUGGEST_H_
