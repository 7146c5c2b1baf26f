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


#include "weaklab/sampler/active_sampler.h"

#include <algorithm>

#include "weaklab/core/error.h"

namespace weaklab {

double ClassUncertainty(const Vec &probabilities) {
  if (probabilities.empty()) return 0.0;
  return std::max(0.0, 1.0 - *std::max_element(probabilities.begin(), probabilities.end()));
}

double SequenceUncertainty(const Decoded &decoded) {
  if (decoded.confidence.empty()) return 0.0;
  double sum = 0.0;
  for (double c : decoded.confidence) sum += std::max(0.0, 1.0 - c);
  return sum / static_cast<double>(decoded.confidence.size());
}

std::vector<DocId> SelectBatch(const std::vector<DocId> &pool, const std::set<DocId> &annotated,
                               size_t k, const UncertaintyFn &uncertainty) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "batch size must be at least 1");
  std::set<DocId> open;
  for (DocId id : pool) {
    if (!annotated.count(id)) open.insert(id);
  }
  if (open.empty()) throw Error(ErrorCode::kEmptyPool, "no unannotated documents left");

  std::vector<std::pair<double, DocId>> scored;
  for (DocId id : open) scored.push_back({uncertainty ? uncertainty(id) : 0.0, id});
  std::stable_sort(scored.begin(), scored.end(), [](const auto &a, const auto &b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<DocId> out;
  for (size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace weaklab
