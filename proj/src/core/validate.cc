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

#include "weaklab/core/validate.h"

namespace weaklab {
namespace {

std::string Describe(const Span &s) {
  return "(" + std::to_string(s.start) + "," + std::to_string(s.end) + ")";
}

void CheckSpan(const char *role, const Span &s, const Document &doc,
               std::vector<std::string> *out) {
  if (s.doc_id != doc.id) {
    out->push_back(std::string(role) + " span refers to another document");
  }
  if (s.start >= s.end) {
    out->push_back(std::string("empty span ") + Describe(s));
  } else if (s.end > doc.tokens().size()) {
    out->push_back(std::string(role) + " span " + Describe(s) + " exceeds " +
                   std::to_string(doc.tokens().size()) + " tokens");
  }
}

AnnotationKind KindForTask(TaskKind t) {
  switch (t) {
    case TaskKind::kSequenceLabeling: return AnnotationKind::kSpan;
    case TaskKind::kRelationExtraction: return AnnotationKind::kRelation;
    case TaskKind::kSentimentAnalysis: return AnnotationKind::kClass;
  }
  return AnnotationKind::kSpan;
}

}  // namespace

ValidationResult ValidateAnnotation(const Annotation &a, const Document &doc,
                                    const LabelSchema &schema) {
  ValidationResult r;
  auto &v = r.violations;

  if (a.doc_id != doc.id) v.push_back("annotation refers to another document");
  if (!schema.Contains(a.label) ||
      (schema.task == TaskKind::kSequenceLabeling && a.label == kOutsideLabel)) {
    v.push_back("unknown label '" + a.label + "'");
  }
  if (a.kind != KindForTask(schema.task)) {
    v.push_back(std::string("annotation kind ") + std::string(KindName(a.kind)) +
                " does not match task " + std::string(TaskName(schema.task)));
  }

  switch (a.kind) {
    case AnnotationKind::kSpan:
      if (!a.span) {
        v.push_back("span annotation without a span");
      } else {
        CheckSpan("target", *a.span, doc, &v);
      }
      break;
    case AnnotationKind::kRelation:
      if (!a.span || !a.span2) {
        v.push_back("relation annotation needs two argument spans");
      } else {
        CheckSpan("subject", *a.span, doc, &v);
        CheckSpan("object", *a.span2, doc, &v);
        if (a.span->Overlaps(*a.span2)) {
          v.push_back("overlapping arguments " + Describe(*a.span) + " and " +
                      Describe(*a.span2));
        }
      }
      break;
    case AnnotationKind::kClass:
      if (a.span) CheckSpan("aspect", *a.span, doc, &v);
      break;
  }

  if (a.explanation) {
    const Explanation &e = *a.explanation;
    if (e.variant == ExplanationVariant::kTrigger) {
      if (e.trigger_spans.empty()) v.push_back("trigger explanation without trigger spans");
      for (const Span &t : e.trigger_spans) {
        if (t.doc_id != doc.id || t.start >= t.end || t.end > doc.tokens().size()) {
          v.push_back("trigger span " + Describe(t) + " outside sentence");
        }
      }
    } else {
      if (!e.parsed_form) {
        v.push_back("natural language explanation without a parsed logical form");
      } else {
        for (const std::string &p : CheckLogicalForm(*e.parsed_form)) v.push_back(p);
      }
    }
  }

  if (a.source == Source::kWeak && !a.provenance) {
    v.push_back("weak annotation without provenance");
  }
  return r;
}

}  // namespace weaklab
