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

// Rule-based parser from constrained natural-language explanations to
// logical forms.
//
//   the phrase 'caused by' occurs between SUBJ and OBJ
//     => BETWEEN(PHRASE("caused by"), SUBJ, OBJ)
//
// Quoted segments become phrase literals, surface templates map to
// predicates, "and"/"or"/"not" build logical nodes ("not" binds tightest,
// then "and", then "or"), and parentheses group. Every word must either be
// consumed by a template or be stop-word glue; anything else is an error.
// The parser is stateless and reentrant.

#ifndef WEAKLAB_PARSER_PARSER_H_
#define WEAKLAB_PARSER_PARSER_H_

#include <string>
#include <string_view>

#include "weaklab/core/logical_form.h"
#include "weaklab/core/types.h"

namespace weaklab {

// Throws ParseError naming the first unconsumed non-stop-word token,
// Error(kUnknownAnchor) when an anchor is not available for `task`, and
// Error(kEmptyText) for blank input.
LogicalForm Parse(std::string_view nl_text, TaskKind task, std::string_view label);

// Renders a clause tree back to explanation text that Parse() maps to a
// structurally identical tree.
std::string Render(const Clause &clause);
inline std::string Render(const LogicalForm &form) { return Render(form.root); }

}  // namespace weaklab

#endif  // WEAKLAB_PARSER_PARSER_H_
