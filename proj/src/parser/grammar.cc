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

#include "weaklab/parser/grammar.h"

#include <algorithm>
#include <array>
#include <sstream>

namespace weaklab {
namespace {

constexpr std::array<std::string_view, 6> kStopWords = {"the", "a", "an", "is", "word", "phrase"};

SurfaceTemplate Make(Predicate p, std::string pattern, bool adds_contains = false) {
  SurfaceTemplate t;
  t.predicate = p;
  t.pattern = std::move(pattern);
  t.adds_contains = adds_contains;
  std::istringstream words(t.pattern);
  std::string w;
  while (words >> w) {
    if (w == "{P}") {
      t.items.push_back({ItemKind::kPhrase, ""});
    } else if (w == "{N}") {
      t.items.push_back({ItemKind::kInt, ""});
    } else if (w == "{A}") {
      t.items.push_back({ItemKind::kAnchor, ""});
    } else if (IsStopWord(w)) {
      t.items.push_back({ItemKind::kStop, w});
    } else {
      t.items.push_back({ItemKind::kKeyword, w});
    }
  }
  return t;
}

std::vector<SurfaceTemplate> BuildTemplates() {
  using P = Predicate;
  // The first template listed for a predicate is its canonical rendering.
  return {
      Make(P::kContains, "{P} appears in the sentence"),
      Make(P::kContains, "{P} is in the sentence"),
      Make(P::kStartsWith, "{P} starts the sentence"),
      Make(P::kStartsWith, "{P} begins the sentence"),
      Make(P::kEndsWith, "{P} ends the sentence"),

      Make(P::kWithin, "{P} is within {N} words of {A}", /*adds_contains=*/true),
      Make(P::kWithin, "{P} occurs within {N} words of {A}"),
      Make(P::kWithin, "{P} is no more than {N} words from {A}"),
      Make(P::kAtLeastNWordsBetween, "there are at least {N} words between {A} and {A}"),
      Make(P::kCountOccurrences, "{P} appears at least {N} times"),
      Make(P::kCountOccurrences, "{P} occurs at least {N} times"),

      Make(P::kLeft, "{P} occurs to the left of {A}"),
      Make(P::kLeft, "{P} is to the left of {A}"),
      Make(P::kLeft, "{P} occurs before {A}"),
      Make(P::kRight, "{P} occurs to the right of {A}"),
      Make(P::kRight, "{P} is to the right of {A}"),
      Make(P::kRight, "{P} occurs after {A}"),
      Make(P::kBetween, "{P} occurs between {A} and {A}"),
      Make(P::kBetween, "{P} is between {A} and {A}"),
      Make(P::kDirectlyPrecedes, "{P} directly precedes {A}"),
      Make(P::kDirectlyPrecedes, "{P} occurs immediately before {A}"),
  };
}

}  // namespace

std::string SurfaceTemplate::SurfaceForm() const {
  std::string out;
  size_t i = phrase_initial() ? 1 : 0;
  for (; i < items.size(); ++i) {
    const TemplateItem &item = items[i];
    if (item.kind != ItemKind::kKeyword && item.kind != ItemKind::kStop) break;
    if (!out.empty()) out += ' ';
    out += item.word;
  }
  return out;
}

const std::vector<SurfaceTemplate> &Templates() {
  static const std::vector<SurfaceTemplate> templates = BuildTemplates();
  return templates;
}

const std::vector<SurfaceTemplate> &OpenerTemplates() {
  static const std::vector<SurfaceTemplate> openers = {
      Make(Predicate::kContains, "the word {P}"),
      Make(Predicate::kContains, "the phrase {P}"),
  };
  return openers;
}

const SurfaceTemplate &CanonicalTemplate(Predicate p, bool adds_contains) {
  for (const SurfaceTemplate &t : Templates()) {
    if (t.predicate == p && t.adds_contains == adds_contains) return t;
  }
  // Every leaf predicate has a non-sugared template.
  for (const SurfaceTemplate &t : Templates()) {
    if (t.predicate == p) return t;
  }
  return Templates().front();
}

bool IsStopWord(std::string_view lowered_word) {
  return std::find(kStopWords.begin(), kStopWords.end(), lowered_word) != kStopWords.end();
}

std::vector<Anchor> TaskAnchors(TaskKind task) {
  if (task == TaskKind::kRelationExtraction) return {Anchor::kSubj, Anchor::kObj};
  return {Anchor::kTerm};
}

std::vector<PredicateInfo> GrammarPredicates() {
  std::vector<PredicateInfo> out;
  for (int i = 0; i < kNumPredicates; ++i) {
    const PredicateSignature &sig = Signature(static_cast<Predicate>(i));
    PredicateInfo info{std::string(sig.name), sig.category, sig.arity, sig.variadic, {}};
    switch (sig.predicate) {
      case Predicate::kAnd: info.surface_forms = {"and"}; break;
      case Predicate::kOr: info.surface_forms = {"or"}; break;
      case Predicate::kNot: info.surface_forms = {"not"}; break;
      default:
        for (const SurfaceTemplate &t : Templates()) {
          if (t.predicate == sig.predicate) info.surface_forms.push_back(t.SurfaceForm());
        }
    }
    out.push_back(std::move(info));
  }
  return out;
}

nlohmann::json GrammarToJson() {
  nlohmann::json preds = nlohmann::json::array();
  for (const PredicateInfo &info : GrammarPredicates()) {
    nlohmann::json p = {{"name", info.name},
                        {"category", std::string(CategoryName(info.category))},
                        {"arity", info.arity},
                        {"variadic", info.variadic},
                        {"surface_forms", info.surface_forms}};
    nlohmann::json templates = nlohmann::json::array();
    for (const SurfaceTemplate &t : Templates()) {
      if (std::string(PredicateName(t.predicate)) == info.name) templates.push_back(t.pattern);
    }
    p["templates"] = templates;
    preds.push_back(std::move(p));
  }
  nlohmann::json stop = nlohmann::json::array();
  for (std::string_view w : kStopWords) stop.push_back(std::string(w));
  return {{"predicates", preds},
          {"stop_words", stop},
          {"openers", {"the word", "the phrase", "there are", "not"}},
          {"anchors",
           {{"relation_extraction", {"SUBJ", "OBJ"}},
            {"sentiment_analysis", {"TERM"}},
            {"sequence_labeling", {"TERM"}}}}};
}

}  // namespace weaklab
