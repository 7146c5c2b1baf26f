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


#include "weaklab/store/codec.h"

#include "weaklab/core/error.h"
#include "weaklab/core/tokenizer.h"

namespace weaklab {
namespace {

using nlohmann::json;

const char *VariantName(ExplanationVariant v) {
  return v == ExplanationVariant::kTrigger ? "trigger" : "natural_language";
}

ExplanationVariant VariantFromName(const std::string &s) {
  if (s == "trigger") return ExplanationVariant::kTrigger;
  if (s == "natural_language") return ExplanationVariant::kNaturalLanguage;
  throw Error(ErrorCode::kInvalidArgument, "unknown explanation variant '" + s + "'");
}

json SpanToJson(const Span &s) { return {{"doc_id", s.doc_id}, {"start", s.start}, {"end", s.end}}; }

Span SpanFromJson(const json &j) {
  return Span{j.at("doc_id").get<DocId>(), j.at("start").get<size_t>(), j.at("end").get<size_t>()};
}

json CharsToJson(const std::pair<size_t, size_t> &r) {
  return {{"start", r.first}, {"end", r.second}};
}

Span CharsFromJson(const json &j, const Document &doc) {
  return TokenSpan(doc, j.at("start").get<size_t>(), j.at("end").get<size_t>());
}

json ProvenanceToJson(const Provenance &p) {
  return {{"kind", p.kind}, {"id", p.id}, {"score", p.score}};
}

Provenance ProvenanceFromJson(const json &j) {
  return Provenance{j.at("kind").get<std::string>(), j.at("id").get<std::string>(),
                    j.at("score").get<double>()};
}

AnnotationKind KindOf(const json &j) {
  auto k = KindFromName(j.at("kind").get<std::string>());
  if (!k) throw Error(ErrorCode::kInvalidArgument, "unknown annotation kind");
  return *k;
}

Source SourceOf(const json &j) {
  auto s = SourceFromName(j.value("source", "human"));
  if (!s) throw Error(ErrorCode::kInvalidArgument, "unknown annotation source");
  return *s;
}

}  // namespace

json SchemaToJson(const LabelSchema &schema) {
  json labels = json::array();
  for (const LabelDef &l : schema.labels) {
    labels.push_back({{"name", l.name}, {"shortcut", l.shortcut}, {"color", l.color}});
  }
  return {{"task", std::string(TaskName(schema.task))}, {"labels", labels}};
}

LabelSchema SchemaFromJson(const json &j) {
  LabelSchema s;
  auto task = TaskFromName(j.at("task").get<std::string>());
  if (!task) throw Error(ErrorCode::kInvalidArgument, "unknown task");
  s.task = *task;
  for (const json &l : j.at("labels")) {
    if (l.is_string()) {
      s.labels.push_back({l.get<std::string>(), "", ""});
    } else {
      s.labels.push_back({l.at("name").get<std::string>(), l.value("shortcut", ""),
                          l.value("color", "")});
    }
  }
  return s;
}

json DocumentToJson(const Document &doc) {
  return {{"id", doc.id}, {"text", doc.text()}, {"meta", doc.meta}};
}

Document DocumentFromJson(const json &j) {
  Document d;
  d.id = j.value("id", DocId{0});
  d.content = Tokenize(j.at("text").get<std::string>());
  if (j.contains("meta")) d.meta = j.at("meta").get<std::map<std::string, std::string>>();
  return d;
}

json ExplanationToJson(const Explanation &e) {
  json j = {{"variant", VariantName(e.variant)}};
  if (e.variant == ExplanationVariant::kTrigger) {
    j["trigger_spans"] = json::array();
    for (const Span &s : e.trigger_spans) j["trigger_spans"].push_back(SpanToJson(s));
  } else {
    j["nl_text"] = e.nl_text;
    if (e.parsed_form) j["logical_form"] = ToJson(*e.parsed_form);
  }
  return j;
}

Explanation ExplanationFromJson(const json &j) {
  Explanation e;
  e.variant = VariantFromName(j.at("variant").get<std::string>());
  if (e.variant == ExplanationVariant::kTrigger) {
    for (const json &s : j.at("trigger_spans")) e.trigger_spans.push_back(SpanFromJson(s));
  } else {
    e.nl_text = j.at("nl_text").get<std::string>();
    if (j.contains("logical_form")) e.parsed_form = LogicalFormFromJson(j.at("logical_form"));
  }
  return e;
}

json AnnotationToJson(const Annotation &a) {
  json j = {{"id", a.id},
            {"doc_id", a.doc_id},
            {"kind", std::string(KindName(a.kind))},
            {"label", a.label},
            {"source", std::string(SourceName(a.source))},
            {"created_at", a.created_at}};
  if (a.span) j["span"] = SpanToJson(*a.span);
  if (a.span2) j["span2"] = SpanToJson(*a.span2);
  if (a.explanation) j["explanation"] = ExplanationToJson(*a.explanation);
  if (a.provenance) j["provenance"] = ProvenanceToJson(*a.provenance);
  return j;
}

Annotation AnnotationFromJson(const json &j) {
  Annotation a;
  a.id = j.value("id", AnnotationId{0});
  a.doc_id = j.at("doc_id").get<DocId>();
  a.kind = KindOf(j);
  a.label = j.at("label").get<std::string>();
  a.source = SourceOf(j);
  a.created_at = j.value("created_at", int64_t{0});
  if (j.contains("span")) a.span = SpanFromJson(j.at("span"));
  if (j.contains("span2")) a.span2 = SpanFromJson(j.at("span2"));
  if (j.contains("explanation")) a.explanation = ExplanationFromJson(j.at("explanation"));
  if (j.contains("provenance")) a.provenance = ProvenanceFromJson(j.at("provenance"));
  return a;
}

std::pair<size_t, size_t> CharRange(const Document &doc, const Span &span) {
  const auto &toks = doc.tokens();
  if (span.start >= span.end || span.end > toks.size()) {
    throw Error(ErrorCode::kInvalidArgument, "span outside document");
  }
  return {toks[span.start].char_start, toks[span.end - 1].char_end};
}

Span TokenSpan(const Document &doc, size_t start, size_t end) {
  const auto &toks = doc.tokens();
  Span s{doc.id, toks.size(), toks.size()};
  for (size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].char_start == start) s.start = i;
    if (toks[i].char_end == end) s.end = i + 1;
  }
  if (s.start >= toks.size() || s.end > toks.size() || s.start >= s.end) {
    throw Error(ErrorCode::kInvalidArgument, "character range [" + std::to_string(start) + ", " +
                                                 std::to_string(end) +
                                                 ") does not fall on token boundaries");
  }
  return s;
}

json AnnotationToExportJson(const Annotation &a, const Document &doc) {
  json j = {{"kind", std::string(KindName(a.kind))}};
  if (a.span) j["span"] = CharsToJson(CharRange(doc, *a.span));
  if (a.span2) j["span2"] = CharsToJson(CharRange(doc, *a.span2));
  j["label"] = a.label;
  j["source"] = std::string(SourceName(a.source));
  j["created_at"] = a.created_at;
  if (a.explanation) {
    const Explanation &e = *a.explanation;
    json x = {{"variant", VariantName(e.variant)}};
    if (e.variant == ExplanationVariant::kTrigger) {
      x["triggers"] = json::array();
      for (const Span &s : e.trigger_spans) x["triggers"].push_back(CharsToJson(CharRange(doc, s)));
    } else {
      x["nl_text"] = e.nl_text;
      if (e.parsed_form) x["logical_form"] = ToJson(*e.parsed_form);
    }
    j["explanation"] = x;
  }
  if (a.provenance && a.source == Source::kWeak) j["provenance"] = ProvenanceToJson(*a.provenance);
  return j;
}

Annotation AnnotationFromExportJson(const json &j, const Document &doc) {
  Annotation a;
  a.doc_id = doc.id;
  a.kind = KindOf(j);
  a.label = j.at("label").get<std::string>();
  a.source = SourceOf(j);
  a.created_at = j.value("created_at", int64_t{0});
  if (j.contains("span")) a.span = CharsFromJson(j.at("span"), doc);
  if (j.contains("span2")) a.span2 = CharsFromJson(j.at("span2"), doc);
  if (j.contains("explanation")) {
    const json &x = j.at("explanation");
    Explanation e;
    e.variant = VariantFromName(x.at("variant").get<std::string>());
    if (e.variant == ExplanationVariant::kTrigger) {
      for (const json &t : x.at("triggers")) e.trigger_spans.push_back(CharsFromJson(t, doc));
    } else {
      e.nl_text = x.at("nl_text").get<std::string>();
      if (x.contains("logical_form")) e.parsed_form = LogicalFormFromJson(x.at("logical_form"));
    }
    a.explanation = std::move(e);
  }
  if (j.contains("provenance")) a.provenance = ProvenanceFromJson(j.at("provenance"));
  return a;
}

}  // namespace weaklab
