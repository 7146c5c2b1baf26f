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


// JSON encodings of core values. Two flavors: the event log stores token
// spans verbatim; exports carry character offsets so files stay meaningful
// without this tokenizer.

#ifndef WEAKLAB_STORE_CODEC_H_
#define WEAKLAB_STORE_CODEC_H_

#include <string>
#include <utility>

#include "json.hpp"
#include "weaklab/core/types.h"

namespace weaklab {

nlohmann::json SchemaToJson(const LabelSchema &schema);
LabelSchema SchemaFromJson(const nlohmann::json &j);

// {"id", "text", "meta"}; tokens are recomputed on decode.
nlohmann::json DocumentToJson(const Document &doc);
Document DocumentFromJson(const nlohmann::json &j);

// Token-level encoding used by the event log. Lossless.
nlohmann::json AnnotationToJson(const Annotation &a);
Annotation AnnotationFromJson(const nlohmann::json &j);

nlohmann::json ExplanationToJson(const Explanation &e);
Explanation ExplanationFromJson(const nlohmann::json &j);

// Character range [first, second) covered by a token span.
std::pair<size_t, size_t> CharRange(const Document &doc, const Span &span);

// Token span whose characters are exactly [start, end). Throws
// Error(kInvalidArgument) when the range does not fall on token edges.
Span TokenSpan(const Document &doc, size_t start, size_t end);

// Export encoding: character offsets, no annotation id, provenance only for
// weak annotations.
nlohmann::json AnnotationToExportJson(const Annotation &a, const Document &doc);
Annotation AnnotationFromExportJson(const nlohmann::json &j, const Document &doc);

}  // namespace weaklab

#endif  // WEAKLAB_STORE_CODEC_H_
