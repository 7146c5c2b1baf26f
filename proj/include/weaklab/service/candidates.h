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


// Candidate anchors for unlabeled documents: entity spans and the matching
// instances the weak labeler and recommender score.

#ifndef WEAKLAB_SERVICE_CANDIDATES_H_
#define WEAKLAB_SERVICE_CANDIDATES_H_

#include <optional>
#include <string_view>
#include <vector>

#include "weaklab/core/types.h"
#include "weaklab/matcher/weak_labeler.h"

namespace weaklab {

// Token spans listed in meta "entities" as "start-end" pairs separated by
// commas, else maximal runs of capitalized or numeric tokens. Pronoun "I"
// and a lone sentence-initial function word are not candidates.
std::vector<Span> CandidateSpans(const Document &doc);

// Parses "start-end[,start-end...]". Nullopt on malformed input or spans
// outside [0, token_count].
std::optional<std::vector<Span>> ParseSpanList(std::string_view text, DocId doc,
                                               size_t token_count);

// Relation: every ordered pair of non-overlapping candidates. Sequence
// labeling: every candidate as TERM. Sentiment: one instance whose TERM
// comes from meta "term" when present. Contexts point into `doc`.
std::vector<MatchInstance> CandidateInstances(const Document &doc, TaskKind task);

}  // namespace weaklab

#endif  // WEAKLAB_SERVICE_CANDIDATES_H_
