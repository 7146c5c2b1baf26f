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

// Built-in predicate inventory and the surface templates that realize it.
//
// A template is a whitespace-separated pattern such as
//
//   {P} occurs between {A} and {A}
//
// where {P} is a quoted phrase, {N} a non-negative integer and {A} an anchor
// (SUBJ, OBJ, TERM). Words in the stop list are optional glue: they match
// when present and are skipped otherwise. Every other word is a keyword that
// must appear. The parser, the autosuggester, the pretty printer and the
// grammar JSON export all read this one table.

#ifndef WEAKLAB_PARSER_GRAMMAR_H_
#define WEAKLAB_PARSER_GRAMMAR_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "weaklab/core/logical_form.h"
#include "weaklab/core/types.h"

namespace weaklab {

enum class ItemKind { kKeyword, kStop, kPhrase, kInt, kAnchor };

struct TemplateItem {
  ItemKind kind;
  std::string word;  // keyword and stop items only
};

struct SurfaceTemplate {
  Predicate predicate;
  std::string pattern;
  // "{P} is within {N} words of {A}" expands to
  // AND(CONTAINS(P), WITHIN(P, N, A)).
  bool adds_contains = false;
  std::vector<TemplateItem> items;

  // Keyword text between the leading phrase slot and the first later slot,
  // e.g. "occurs between". This is the predicate's surface form.
  std::string SurfaceForm() const;
  bool phrase_initial() const { return !items.empty() && items[0].kind == ItemKind::kPhrase; }
};

// Public view of one predicate.
struct PredicateInfo {
  std::string name;
  PredicateCategory category;
  int arity;
  bool variadic;
  std::vector<std::string> surface_forms;
};

const std::vector<SurfaceTemplate> &Templates();

// Clause openers offered by autosuggest: "the word {P}", "the phrase {P}".
// They only carry glue, so they are not part of the parse table.
const std::vector<SurfaceTemplate> &OpenerTemplates();

// The template the pretty printer uses for `p` (and `adds_contains`).
const SurfaceTemplate &CanonicalTemplate(Predicate p, bool adds_contains);

bool IsStopWord(std::string_view lowered_word);

// Anchors an explanation may reference for a task. SUBJ/OBJ belong to
// relation extraction; TERM names the aspect term (sentiment) or the
// candidate entity (sequence labeling).
std::vector<Anchor> TaskAnchors(TaskKind task);

// Fixed inventory in a stable order: string_match, distance_count,
// deterministic, logical.
std::vector<PredicateInfo> GrammarPredicates();

// {"predicates": [{name, category, arity, variadic, surface_forms,
// templates}], "stop_words": [...], "anchors": {...}}.
nlohmann::json GrammarToJson();

}  // namespace weaklab

#endif  // WEAKLAB_PARSER_GRAMMAR_H_
