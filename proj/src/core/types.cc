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

#include "weaklab/core/types.h"

#include <set>

#include "weaklab/core/error.h"

namespace weaklab {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyText: return "empty_text";
    case ErrorCode::kUnparseableExplanation: return "unparseable_explanation";
    case ErrorCode::kUnknownAnchor: return "unknown_anchor";
    case ErrorCode::kMissingAnchor: return "missing_anchor";
    case ErrorCode::kDegenerateData: return "degenerate_data";
    case ErrorCode::kInvalidBio: return "invalid_bio";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kSchemaMismatch: return "schema_mismatch";
    case ErrorCode::kEmptyPool: return "empty_pool";
    case ErrorCode::kMalformedRecord: return "malformed_record";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

std::string_view TaskName(TaskKind t) {
  switch (t) {
    case TaskKind::kSequenceLabeling: return "sequence_labeling";
    case TaskKind::kRelationExtraction: return "relation_extraction";
    case TaskKind::kSentimentAnalysis: return "sentiment_analysis";
  }
  return "";
}

std::optional<TaskKind> TaskFromName(std::string_view name) {
  if (name == "sequence_labeling") return TaskKind::kSequenceLabeling;
  if (name == "relation_extraction") return TaskKind::kRelationExtraction;
  if (name == "sentiment_analysis") return TaskKind::kSentimentAnalysis;
  return std::nullopt;
}

std::string_view KindName(AnnotationKind k) {
  switch (k) {
    case AnnotationKind::kSpan: return "span";
    case AnnotationKind::kRelation: return "relation";
    case AnnotationKind::kClass: return "class";
  }
  return "";
}

std::optional<AnnotationKind> KindFromName(std::string_view name) {
  if (name == "span") return AnnotationKind::kSpan;
  if (name == "relation") return AnnotationKind::kRelation;
  if (name == "class") return AnnotationKind::kClass;
  return std::nullopt;
}

std::string_view SourceName(Source s) {
  switch (s) {
    case Source::kHuman: return "human";
    case Source::kWeak: return "weak";
    case Source::kRecommendation: return "recommendation";
  }
  return "";
}

std::optional<Source> SourceFromName(std::string_view name) {
  if (name == "human") return Source::kHuman;
  if (name == "weak") return Source::kWeak;
  if (name == "recommendation") return Source::kRecommendation;
  return std::nullopt;
}

bool LabelSchema::Contains(std::string_view name) const {
  for (const LabelDef &l : labels) {
    if (l.name == name) return true;
  }
  return false;
}

std::vector<std::string> LabelSchema::ModelLabels() const {
  std::vector<std::string> out;
  for (const LabelDef &l : labels) {
    if (task == TaskKind::kSequenceLabeling && l.name == kOutsideLabel) continue;
    out.push_back(l.name);
  }
  return out;
}

std::vector<std::string> LabelSchema::Check() const {
  std::vector<std::string> problems;
  std::set<std::string> names, keys;
  for (const LabelDef &l : labels) {
    if (l.name.empty()) problems.push_back("empty label name");
    if (!names.insert(l.name).second) problems.push_back("duplicate label '" + l.name + "'");
    if (!l.shortcut.empty() && !keys.insert(l.shortcut).second) {
      problems.push_back("duplicate shortcut key '" + l.shortcut + "'");
    }
  }
  if (task == TaskKind::kSequenceLabeling && !names.count(std::string(kOutsideLabel))) {
    problems.push_back("sequence labeling schema must contain \"O\"");
  }
  if (ModelLabels().empty()) problems.push_back("schema has no labels");
  return problems;
}

}  // namespace weaklab
