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


// Corpus import and (data, label, explanation) export.
//
// JSON export is an array of
//   {"doc": {"id", "text", "meta"}, "annotations": [...]}
// ordered by document id, annotations by id, with character offsets. The
// same shape imports back, so export -> import -> export is byte-identical.
//
// CSV export has one row per annotation, CRLF line ends and RFC 4180
// quoting; explanation_payload is compact JSON.

#ifndef WEAKLAB_STORE_EXPORT_H_
#define WEAKLAB_STORE_EXPORT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "weaklab/store/project_store.h"

namespace weaklab {

enum class ImportFormat { kPlain, kCsv, kJson };

std::optional<ImportFormat> ImportFormatFromName(std::string_view name);

struct ImportRecord {
  size_t line = 0;  // 1-based position in the payload
  std::string text;
  std::map<std::string, std::string> meta;
  nlohmann::json annotations = nlohmann::json::array();  // export encoding
};

// plain: one document per non-blank line. csv: header row with a "text"
// column; other columns become meta unless the header is the export header. json: an
// array of {"text", "meta"?} or exported {"doc", "annotations"} records.
// Throws RecordError with the offending line.
std::vector<ImportRecord> ParseCorpus(std::string_view payload, ImportFormat format);

struct ImportResult {
  size_t documents_added = 0;
  size_t duplicates = 0;
  size_t annotations_added = 0;
};

// Annotations attached to a duplicate text go onto the stored document.
// Every record is checked before anything is written, so a RecordError
// leaves the store untouched.
ImportResult ImportCorpus(ProjectStore &store, std::string_view payload, ImportFormat format);

struct ExportOptions {
  bool include_weak = false;
};

std::string ExportJson(const ProjectState &state, const ExportOptions &options = {});
std::string ExportCsv(const ProjectState &state, const ExportOptions &options = {});

// RFC 4180. Quotes a field only when it holds a comma, quote, CR or LF.
std::string CsvField(std::string_view field);

struct CsvRow {
  size_t line = 0;  // 1-based line where the row starts
  std::vector<std::string> fields;
};

// Rows of an RFC 4180 payload; accepts LF or CRLF. Throws RecordError on
// an unterminated quote or text after a closing quote.
std::vector<CsvRow> ParseCsv(std::string_view payload);

inline const std::vector<std::string> &CsvColumns() {
  static const std::vector<std::string> kColumns = {
      "doc_id",      "text",      "kind",  "span_start", "span_end",
      "span2_start", "span2_end", "label", "source",     "explanation_variant",
      "explanation_payload"};
  return kColumns;
}

}  // namespace weaklab

#endif  // WEAKLAB_STORE_EXPORT_H_
