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


// Trigger-aware sequence labeling. A sentence is labeled once per trigger
// that soft-matches it; each run sees features describing where the trigger
// attends in the sentence, and the runs are combined by per-token vote.

#ifndef WEAKLAB_TRIGGER_TRIGGER_LABELING_H_
#define WEAKLAB_TRIGGER_TRIGGER_LABELING_H_

#include <optional>
#include <string>
#include <vector>

#include "weaklab/core/embeddings.h"
#include "weaklab/core/types.h"
#include "weaklab/models/features.h"
#include "weaklab/models/sequence_labeler.h"
#include "weaklab/trigger/trigger_model.h"

namespace weaklab {

// Context offsets covered by the trigger attention features.
inline constexpr int kTriggerWindow = 3;

// beta_t = exp(tau * (cos(v, e_t) - max_s cos(v, e_s))), so the best token
// gets 1. e_t is the model's embedding row for token t.
Vec TriggerAttention(const TriggerModel &model, const Vec &trigger_vector,
                     const std::vector<std::string> &lowered_tokens, double temperature = 5.0);

// Base token features plus "TRIG:<label>:off=k" with value beta_{i+k} for
// k in [-kTriggerWindow, kTriggerWindow].
FeatureSeq TriggerAwareFeatures(const TokenizedText &text, const Embeddings *embeddings,
                                const TriggerModel &model, const std::string &trigger_label,
                                const Vec &trigger_vector);

struct GoldTrigger {
  std::vector<std::string> tokens;  // lowercased
  std::string label;
};

struct TriggeredSentence {
  TokenizedText text;
  std::vector<std::string> tags;
  std::vector<GoldTrigger> triggers;
  double weight = 1.0;
};

// One example per (sentence, gold trigger). Sentences without triggers
// contribute nothing. Throws Error(kSchemaMismatch) for a trigger label the
// model does not know.
std::vector<SequenceExample> TriggerAwareExamples(const std::vector<TriggeredSentence> &sentences,
                                                  const TriggerModel &model,
                                                  const Embeddings *embeddings);

// Per-token strict plurality, "O" on ties, then stray I-X tags become B-X.
// All predictions must have the same length.
std::vector<std::string> MajorityVote(const std::vector<std::vector<std::string>> &predictions);

// I-X not preceded by B-X or I-X becomes B-X.
std::vector<std::string> RepairBio(std::vector<std::string> tags);

struct TriggerVote {
  std::vector<std::string> tags;
  // One entry per matched trigger, nearest first; score is the distance.
  std::vector<Provenance> provenance;
};

// Nullopt when no trigger in `table` matches the sentence.
std::optional<TriggerVote> TriggerAwareLabels(const SequenceLabeler &labeler,
                                              const TriggerModel &model,
                                              const std::vector<TriggerEntry> &table,
                                              const TokenizedText &text,
                                              const Embeddings *embeddings);

// Span annotations for the voted entities, source weak, provenance from the
// nearest trigger with score 1 / (1 + distance).
std::vector<Annotation> VoteAnnotations(DocId doc_id, const TriggerVote &vote);

}  // namespace weaklab

#endif  // WEAKLAB_TRIGGER_TRIGGER_LABELING_H_
