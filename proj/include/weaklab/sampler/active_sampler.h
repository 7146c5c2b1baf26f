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


// Least-confidence batch selection for the annotation queue.

#ifndef WEAKLAB_SAMPLER_ACTIVE_SAMPLER_H_
#define WEAKLAB_SAMPLER_ACTIVE_SAMPLER_H_

#include <functional>
#include <set>
#include <vector>

#include "weaklab/core/types.h"
#include "weaklab/core/vec.h"
#include "weaklab/models/viterbi.h"

namespace weaklab {

// 1 - max p. Zero for an empty distribution.
double ClassUncertainty(const Vec &probabilities);

// Mean over tokens of 1 - marginal of the decoded tag. Zero for no tokens.
double SequenceUncertainty(const Decoded &decoded);

using UncertaintyFn = std::function<double(DocId)>;

// The k most uncertain unannotated ids, ties by ascending id. An empty
// `uncertainty` (no trained model yet) selects in id order. Duplicate pool
// ids count once. Throws Error(kInvalidArgument) for k == 0 and
// Error(kEmptyPool) when nothing is left to annotate.
std::vector<DocId> SelectBatch(const std::vector<DocId> &pool, const std::set<DocId> &annotated,
                               size_t k, const UncertaintyFn &uncertainty);

}  // namespace weaklab

#endif  // WEAKLAB_SAMPLER_ACTIVE_SAMPLER_H_
