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


// Sparse feature extraction for the recommender models.

#ifndef WEAKLAB_MODELS_FEATURES_H_
#define WEAKLAB_MODELS_FEATURES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weaklab/core/embeddings.h"
#include "weaklab/core/types.h"

namespace weaklab {

struct Feature {
  uint64_t id = 0;
  double value = 0.0;
  bool operator==(const Feature &) const = default;
};

using FeatureVec = std::vector<Feature>;
using FeatureSeq = std::vector<FeatureVec>;  // one vector per token

inline uint64_t FeatureId(std::string_view name) { return Fnv1a(name); }

// "Xx", "X", "d", "x.x" ... with runs of one class collapsed.
std::string TokenShape(std::string_view surface);

// Per-token features for sequence labeling: bias, identity, shape, affixes,
// +-2 context words and the token's word vector when `embeddings` has it.
FeatureSeq TokenFeatures(const TokenizedText &text, const Embeddings *embeddings);

// Anchor spans for sentence-level tasks.
struct InstanceAnchors {
  std::optional<Span> subj;
  std::optional<Span> obj;
  std::optional<Span> term;
};

// Sentence-level features with ids in [0, buckets + embedding dim): hashed
// bag of words, anchor-window words, and the mean word vector in the last
// embedding-dim slots.
FeatureVec ClassifierFeatures(const TokenizedText &text, const InstanceAnchors &anchors,
                              const Embeddings *embeddings, size_t buckets);

inline size_t ClassifierDim(size_t buckets, const Embeddings *embeddings) {
  return buckets + (embeddings != nullptr ? embeddings->dim() : 0);
}

}  // namespace weaklab

#endif  // WEAKLAB_MODELS_FEATURES_H_
