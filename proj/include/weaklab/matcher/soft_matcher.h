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


// Soft matching of logical forms against unlabeled sentences.
//
// Each leaf is scored by one of three modules and the tree is folded with
// fuzzy logic (AND = min, OR = max, NOT = 1 - x):
//
//   string match    per-position keyword similarity in [0, 1]
//   distance/count  1 when the bound holds, linear decay otherwise
//   deterministic   exact positional relations, {0, 1}
//
// A leaf that carries a keyword locates it first (best-scoring position,
// earliest on ties). If that position scores below phrase_sim_floor the leaf
// scores 0; otherwise the leaf scores min(keyword score, relation score).
// With accept = phrase_sim_floor = 1 this reduces to exact matching.

#ifndef WEAKLAB_MATCHER_SOFT_MATCHER_H_
#define WEAKLAB_MATCHER_SOFT_MATCHER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weaklab/core/embeddings.h"
#include "weaklab/core/logical_form.h"
#include "weaklab/core/types.h"

namespace weaklab {

struct Thresholds {
  double accept = 0.7;
  double phrase_sim_floor = 0.7;

  // Throws Error(kInvalidArgument) unless both lie in [0, 1].
  void Check() const;
};

// Sentence plus the anchor spans the task provides. Span::doc_id is ignored.
struct MatchContext {
  const TokenizedText *sentence = nullptr;
  std::optional<Span> subj;
  std::optional<Span> obj;
  std::optional<Span> term;

  const Span *Find(Anchor a) const;
  // Throws Error(kMissingAnchor) when absent.
  const Span &Require(Anchor a) const;
};

struct MatchResult {
  double score = 0.0;
  std::string label;
  std::vector<double> clause_scores;  // per leaf, depth-first order
};

enum class Comparison { kAtMost, kAtLeast, kExactly };

// s_i for every sentence position i. Exact (case-insensitive) windows score
// 1; other windows score the clamped mean token similarity, kept strictly
// below 1. Windows that run past the end score 0.
std::vector<double> StringMatchScores(const TokenizedText &sentence, std::string_view keyword,
                                      const Embeddings &embeddings);

double DistanceCountScore(int observed, Comparison op, int bound);

// Positional relation for a deterministic leaf with its keyword at
// `keyword_position`. Returns 0 or 1.
double DeterministicScore(const Clause &clause, const MatchContext &ctx, size_t keyword_position);

// Folds per-leaf scores (depth-first order) through the logical tree.
double Aggregate(const Clause &root, const std::vector<double> &leaf_scores);

MatchResult MatchSentence(const LogicalForm &form, const MatchContext &ctx,
                          const Thresholds &thresholds, const Embeddings &embeddings);

// Anchors referenced anywhere in the tree.
std::vector<Anchor> RequiredAnchors(const Clause &root);

}  // namespace weaklab

#endif  // WEAKLAB_MATCHER_SOFT_MATCHER_H_
