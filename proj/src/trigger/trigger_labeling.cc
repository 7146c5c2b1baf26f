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


#include "weaklab/trigger/trigger_labeling.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "weaklab/core/error.h"
#include "weaklab/models/metrics.h"

namespace weaklab {

Vec TriggerAttention(const TriggerModel &model, const Vec &trigger_vector,
                     const std::vector<std::string> &lowered_tokens, double temperature) {
  const Matrix &table = model.table();
  Vec beta(lowered_tokens.size());
  double best = -2.0;
  for (size_t t = 0; t < lowered_tokens.size(); ++t) {
    beta[t] = Cosine(trigger_vector, table.Row(model.Row(lowered_tokens[t])));
    best = std::max(best, beta[t]);
  }
  for (double &b : beta) b = std::exp(temperature * (b - best));
  return beta;
}

FeatureSeq TriggerAwareFeatures(const TokenizedText &text, const Embeddings *embeddings,
                                const TriggerModel &model, const std::string &trigger_label,
                                const Vec &trigger_vector) {
  FeatureSeq seq = TokenFeatures(text, embeddings);
  Vec beta = TriggerAttention(model, trigger_vector, text.Lowered());
  const int n = static_cast<int>(seq.size());
  for (int i = 0; i < n; ++i) {
    for (int k = -kTriggerWindow; k <= kTriggerWindow; ++k) {
      int j = i + k;
      if (j < 0 || j >= n) continue;
      seq[i].push_back(
          {FeatureId("TRIG:" + trigger_label + ":off=" + std::to_string(k)), beta[j]});
    }
  }
  return seq;
}

std::vector<SequenceExample> TriggerAwareExamples(const std::vector<TriggeredSentence> &sentences,
                                                  const TriggerModel &model,
                                                  const Embeddings *embeddings) {
  const std::vector<std::string> &labels = model.labels();
  std::vector<SequenceExample> out;
  for (const TriggeredSentence &s : sentences) {
    for (const GoldTrigger &g : s.triggers) {
      if (std::find(labels.begin(), labels.end(), g.label) == labels.end()) {
        throw Error(ErrorCode::kSchemaMismatch, "unknown trigger label '" + g.label + "'");
      }
      out.push_back({TriggerAwareFeatures(s.text, embeddings, model, g.label, model.Encode(g.tokens)),
                     s.tags, s.weight});
    }
  }
  return out;
}

std::vector<std::string> RepairBio(std::vector<std::string> tags) {
  for (size_t i = 0; i < tags.size(); ++i) {
    if (tags[i].rfind("I-", 0) != 0) continue;
    std::string type = tags[i].substr(2);
    bool continues = i > 0 && (tags[i - 1] == "B-" + type || tags[i - 1] == "I-" + type);
    if (!continues) tags[i] = "B-" + type;
  }
  return tags;
}

std::vector<std::string> MajorityVote(const std::vector<std::vector<std::string>> &predictions) {
  if (predictions.empty()) return {};
  const size_t n = predictions[0].size();
  for (const auto &p : predictions) {
    if (p.size() != n) throw Error(ErrorCode::kInvalidArgument, "prediction lengths differ");
  }
  std::vector<std::string> out(n, std::string(kOutsideLabel));
  for (size_t i = 0; i < n; ++i) {
    std::map<std::string, int> counts;
    for (const auto &p : predictions) ++counts[p[i]];
    int best = 0;
    bool tie = false;
    for (const auto &[tag, c] : counts) {
      if (c > best) {
        best = c;
        out[i] = tag;
        tie = false;
      } else if (c == best) {
        tie = true;
      }
    }
    if (tie) out[i] = std::string(kOutsideLabel);
  }
  return RepairBio(std::move(out));
}

std::optional<TriggerVote> TriggerAwareLabels(const SequenceLabeler &labeler,
                                              const TriggerModel &model,
                                              const std::vector<TriggerEntry> &table,
                                              const TokenizedText &text,
                                              const Embeddings *embeddings) {
  if (text.size() == 0) return std::nullopt;
  std::vector<TriggerMatch> matches = model.SoftMatch(text.Lowered(), table);
  if (matches.empty()) return std::nullopt;
  TriggerVote vote;
  std::vector<std::vector<std::string>> runs;
  for (const TriggerMatch &m : matches) {
    const std::string &label = model.labels().at(m.entry->label);
    runs.push_back(
        labeler.Predict(TriggerAwareFeatures(text, embeddings, model, label, m.entry->vector)).tags);
    vote.provenance.push_back({"trigger", m.entry->id, m.distance});
  }
  vote.tags = MajorityVote(runs);
  return vote;
}

std::vector<Annotation> VoteAnnotations(DocId doc_id, const TriggerVote &vote) {
  std::vector<Annotation> out;
  if (vote.provenance.empty()) return out;
  const Provenance &nearest = vote.provenance.front();
  for (const LabeledSpan &s : BioToSpans(vote.tags)) {
    Annotation a;
    a.doc_id = doc_id;
    a.kind = AnnotationKind::kSpan;
    a.span = Span{doc_id, s.start, s.end};
    a.label = s.label;
    a.source = Source::kWeak;
    a.provenance = Provenance{"trigger", nearest.id, 1.0 / (1.0 + nearest.score)};
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace weaklab
