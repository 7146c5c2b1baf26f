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

// Canonical data types shared by every module. All values are immutable
// after construction by convention and safe to share between readers.

#ifndef WEAKLAB_CORE_TYPES_H_
#define WEAKLAB_CORE_TYPES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weaklab/core/logical_form.h"

namespace weaklab {

using DocId = uint64_t;
using AnnotationId = uint64_t;

struct Token {
  std::string surface;
  std::string lower;  // lowercased shadow used for matching
  size_t char_start = 0;
  size_t char_end = 0;  // exclusive

  bool operator==(const Token &) const = default;
};

struct TokenizedText {
  std::string text;
  std::vector<Token> tokens;

  size_t size() const { return tokens.size(); }
  std::vector<std::string> Lowered() const;
  std::vector<std::string> Surfaces() const;
};

struct Document {
  DocId id = 0;
  TokenizedText content;
  std::map<std::string, std::string> meta;

  const std::string &text() const { return content.text; }
  const std::vector<Token> &tokens() const { return content.tokens; }
};

// Token span [start, end) within one document.
struct Span {
  DocId doc_id = 0;
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end > start ? end - start : 0; }
  bool Overlaps(const Span &o) const { return start < o.end && o.start < end; }
  bool operator==(const Span &) const = default;
  auto operator<=>(const Span &) const = default;
};

enum class TaskKind { kSequenceLabeling, kRelationExtraction, kSentimentAnalysis };

std::string_view TaskName(TaskKind t);
std::optional<TaskKind> TaskFromName(std::string_view name);

struct LabelDef {
  std::string name;
  std::string shortcut;
  std::string color;

  bool operator==(const LabelDef &) const = default;
};

inline constexpr std::string_view kOutsideLabel = "O";

struct LabelSchema {
  TaskKind task = TaskKind::kSequenceLabeling;
  std::vector<LabelDef> labels;

  bool Contains(std::string_view name) const;
  // Labels a model can predict: for sequence tasks the entity labels without
  // "O"; for classification tasks every label.
  std::vector<std::string> ModelLabels() const;
  // Returns violated invariants; empty when valid.
  std::vector<std::string> Check() const;

  bool operator==(const LabelSchema &) const = default;
};

enum class AnnotationKind { kSpan, kRelation, kClass };
enum class Source { kHuman, kWeak, kRecommendation };

std::string_view KindName(AnnotationKind k);
std::optional<AnnotationKind> KindFromName(std::string_view name);
std::string_view SourceName(Source s);
std::optional<Source> SourceFromName(std::string_view name);

enum class ExplanationVariant { kTrigger, kNaturalLanguage };

struct Explanation {
  ExplanationVariant variant = ExplanationVariant::kTrigger;
  std::vector<Span> trigger_spans;
  std::string nl_text;
  std::optional<LogicalForm> parsed_form;

  bool operator==(const Explanation &) const = default;
};

// Links a weak annotation to the rule or trigger that produced it.
struct Provenance {
  std::string kind;  // "rule" or "trigger"
  std::string id;
  double score = 0.0;

  bool operator==(const Provenance &) const = default;
};

struct Annotation {
  AnnotationId id = 0;
  DocId doc_id = 0;
  AnnotationKind kind = AnnotationKind::kSpan;
  // span kind: span; relation kind: span (SUBJ) and span2 (OBJ) in click
  // order; class kind: optional aspect span.
  std::optional<Span> span;
  std::optional<Span> span2;
  std::string label;
  std::optional<Explanation> explanation;
  Source source = Source::kHuman;
  int64_t created_at = 0;  // milliseconds since the epoch
  std::optional<Provenance> provenance;

  bool operator==(const Annotation &) const = default;
};

}  // namespace weaklab

#endif  // WEAKLAB_CORE_TYPES_H_
