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


#include "weaklab/store/export.h"

#include <algorithm>
#include <set>

#include "weaklab/core/error.h"
#include "weaklab/core/tokenizer.h"
#include "weaklab/core/validate.h"
#include "weaklab/parser/parser.h"
#include "weaklab/store/codec.h"

namespace weaklab {
namespace {

using nlohmann::json;

size_t LineAt(std::string_view s, size_t offset) {
  offset = std::min(offset, s.size());
  return 1 + static_cast<size_t>(std::count(s.begin(), s.begin() + offset, '\n'));
}

// Start offsets of the elements of a top-level JSON array. Assumes the
// payload already parsed.
std::vector<size_t> ElementOffsets(std::string_view s) {
  std::vector<size_t> out;
  int depth = 0;
  bool in_string = false, escape = false, expect = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (escape) {
        escape = false;
      } else if (c == '\\') {
        escape = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    if (depth == 1 && expect && c != ']') {
      out.push_back(i);
      expect = false;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      if (++depth == 1) expect = true;
    } else if (c == ']' || c == '}') {
      --depth;
    } else if (c == ',' && depth == 1) {
      expect = true;
    }
  }
  return out;
}

std::vector<ImportRecord> ParsePlain(std::string_view payload) {
  std::vector<ImportRecord> out;
  size_t line = 0, pos = 0;
  while (pos <= payload.size()) {
    size_t nl = payload.find('\n', pos);
    if (nl == std::string_view::npos) nl = payload.size();
    ++line;
    std::string text = Trim(payload.substr(pos, nl - pos));
    if (!text.empty()) {
      ImportRecord r;
      r.line = line;
      r.text = std::move(text);
      out.push_back(std::move(r));
    }
    pos = nl + 1;
  }
  return out;
}

std::vector<ImportRecord> ParseCsvCorpus(std::string_view payload) {
  std::vector<CsvRow> rows = ParseCsv(payload);
  if (rows.empty()) return {};
  const std::vector<std::string> &header = rows[0].fields;
  auto text_col = std::find(header.begin(), header.end(), "text");
  if (text_col == header.end()) throw RecordError(rows[0].line, "header has no 'text' column");
  const size_t ti = static_cast<size_t>(text_col - header.begin());
  // Our own export imports as plain text; its other columns are not meta.
  const bool exported = header == CsvColumns();
  std::vector<ImportRecord> out;
  for (size_t r = 1; r < rows.size(); ++r) {
    const CsvRow &row = rows[r];
    if (row.fields.size() == 1 && row.fields[0].empty()) continue;
    if (row.fields.size() != header.size()) {
      throw RecordError(row.line, "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(row.fields.size()));
    }
    ImportRecord rec;
    rec.line = row.line;
    rec.text = Trim(row.fields[ti]);
    if (rec.text.empty()) throw RecordError(row.line, "empty text");
    for (size_t c = 0; c < header.size(); ++c) {
      if (c == ti || exported) continue;
      rec.meta[header[c]] = row.fields[c];
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ImportRecord> ParseJsonCorpus(std::string_view payload) {
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::parse_error &e) {
    throw RecordError(LineAt(payload, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON");
  }
  if (!j.is_array()) throw RecordError(1, "expected a JSON array of records");
  std::vector<size_t> offsets = ElementOffsets(payload);
  std::vector<ImportRecord> out;
  for (size_t i = 0; i < j.size(); ++i) {
    ImportRecord rec;
    rec.line = i < offsets.size() ? LineAt(payload, offsets[i]) : 1;
    const json &e = j[i];
    try {
      const json &doc = e.contains("doc") ? e.at("doc") : e;
      rec.text = doc.at("text").get<std::string>();
      if (doc.contains("meta")) rec.meta = doc.at("meta").get<std::map<std::string, std::string>>();
      if (e.contains("annotations")) rec.annotations = e.at("annotations");
      if (!rec.annotations.is_array()) throw Error(ErrorCode::kInvalidArgument, "annotations must be an array");
    } catch (const std::exception &ex) {
      throw RecordError(rec.line, ex.what());
    }
    if (Trim(rec.text).empty()) throw RecordError(rec.line, "empty text");
    out.push_back(std::move(rec));
  }
  return out;
}

std::string ExplanationPayload(const Explanation &e, const Document &doc) {
  if (e.variant == ExplanationVariant::kTrigger) {
    json t = json::array();
    for (const Span &s : e.trigger_spans) {
      auto r = CharRange(doc, s);
      t.push_back({{"start", r.first}, {"end", r.second}});
    }
    return t.dump();
  }
  json x = {{"nl_text", e.nl_text}};
  if (e.parsed_form) x["logical_form"] = ToJson(*e.parsed_form);
  return x.dump();
}

bool Exported(const Annotation &a, const ExportOptions &o) {
  return o.include_weak || a.source != Source::kWeak;
}

}  // namespace

std::optional<ImportFormat> ImportFormatFromName(std::string_view name) {
  if (name == "plain" || name == "txt") return ImportFormat::kPlain;
  if (name == "csv") return ImportFormat::kCsv;
  if (name == "json") return ImportFormat::kJson;
  return std::nullopt;
}

std::vector<ImportRecord> ParseCorpus(std::string_view payload, ImportFormat format) {
  switch (format) {
    case ImportFormat::kPlain:
      return ParsePlain(payload);
    case ImportFormat::kCsv:
      return ParseCsvCorpus(payload);
    case ImportFormat::kJson:
      return ParseJsonCorpus(payload);
  }
  return {};
}

ImportResult ImportCorpus(ProjectStore &store, std::string_view payload, ImportFormat format) {
  std::vector<ImportRecord> records = ParseCorpus(payload, format);

  // Check every record against a provisional document first.
  std::vector<std::vector<Annotation>> pending(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    const ImportRecord &r = records[i];
    Document doc;
    try {
      doc.content = Tokenize(r.text);
    } catch (const Error &e) {
      throw RecordError(r.line, e.what());
    }
    for (const json &aj : r.annotations) {
      try {
        Annotation a = AnnotationFromExportJson(aj, doc);
        // Hand-written records may carry only the explanation text.
        if (a.explanation && a.explanation->variant == ExplanationVariant::kNaturalLanguage &&
            !a.explanation->parsed_form) {
          a.explanation->parsed_form = Parse(a.explanation->nl_text, store.state().schema.task, a.label);
        }
        ValidationResult v = ValidateAnnotation(a, doc, store.state().schema);
        if (!v.ok()) throw Error(ErrorCode::kInvalidArgument, v.violations.front());
        pending[i].push_back(std::move(a));
      } catch (const std::exception &ex) {
        throw RecordError(r.line, ex.what());
      }
    }
  }

  ImportResult result;
  for (size_t i = 0; i < records.size(); ++i) {
    std::optional<DocId> id = store.AddDocument(records[i].text, records[i].meta);
    if (id) {
      ++result.documents_added;
    } else {
      ++result.duplicates;
      id = store.state().by_hash.at(ContentHash(records[i].text));
    }
    for (Annotation a : pending[i]) {
      a.doc_id = *id;
      if (a.span) a.span->doc_id = *id;
      if (a.span2) a.span2->doc_id = *id;
      if (a.explanation) {
        for (Span &s : a.explanation->trigger_spans) s.doc_id = *id;
      }
      store.AddAnnotation(std::move(a));
      ++result.annotations_added;
    }
  }
  return result;
}

std::string ExportJson(const ProjectState &state, const ExportOptions &options) {
  std::map<DocId, json> per_doc;
  for (const auto &[_, a] : state.annotations) {
    if (!Exported(a, options)) continue;
    per_doc[a.doc_id].push_back(AnnotationToExportJson(a, state.documents.at(a.doc_id)));
  }
  json out = json::array();
  for (const auto &[id, doc] : state.documents) {
    json anns = per_doc.count(id) ? per_doc[id] : json::array();
    out.push_back({{"doc", DocumentToJson(doc)}, {"annotations", anns}});
  }
  return out.dump(2);
}

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string ExportCsv(const ProjectState &state, const ExportOptions &options) {
  std::string out;
  auto row = [&out](const std::vector<std::string> &fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += CsvField(fields[i]);
    }
    out += "\r\n";
  };
  row(CsvColumns());
  for (const auto &[_, a] : state.annotations) {
    if (!Exported(a, options)) continue;
    const Document &doc = state.documents.at(a.doc_id);
    std::string s1, e1, s2, e2, variant, payload;
    if (a.span) {
      auto r = CharRange(doc, *a.span);
      s1 = std::to_string(r.first);
      e1 = std::to_string(r.second);
    }
    if (a.span2) {
      auto r = CharRange(doc, *a.span2);
      s2 = std::to_string(r.first);
      e2 = std::to_string(r.second);
    }
    if (a.explanation) {
      variant = a.explanation->variant == ExplanationVariant::kTrigger ? "trigger"
                                                                        : "natural_language";
      payload = ExplanationPayload(*a.explanation, doc);
    }
    row({std::to_string(a.doc_id), doc.text(), std::string(KindName(a.kind)), s1, e1, s2, e2,
         a.label, std::string(SourceName(a.source)), variant, payload});
  }
  return out;
}

std::vector<CsvRow> ParseCsv(std::string_view s) {
  std::vector<CsvRow> rows;
  size_t line = 1, i = 0;
  while (i < s.size()) {
    CsvRow row;
    row.line = line;
    while (true) {
      std::string field;
      if (i < s.size() && s[i] == '"') {
        ++i;
        while (true) {
          if (i >= s.size()) throw RecordError(row.line, "unterminated quoted field");
          char c = s[i++];
          if (c == '"') {
            if (i < s.size() && s[i] == '"') {
              field += '"';
              ++i;
              continue;
            }
            break;
          }
          if (c == '\n') ++line;
          field += c;
        }
        if (i < s.size() && s[i] != ',' && s[i] != '\r' && s[i] != '\n') {
          throw RecordError(line, "text after closing quote");
        }
      } else {
        while (i < s.size() && s[i] != ',' && s[i] != '\r' && s[i] != '\n') field += s[i++];
      }
      row.fields.push_back(std::move(field));
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i < s.size() && s[i] == '\r') ++i;
    if (i < s.size() && s[i] == '\n') ++i;
    ++line;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace weaklab
