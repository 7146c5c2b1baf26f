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


// Exact decoding for linear-chain models.

#ifndef WEAKLAB_MODELS_VITERBI_H_
#define WEAKLAB_MODELS_VITERBI_H_

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "weaklab/core/vec.h"

namespace weaklab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// BIO tag inventory for a set of entity labels: "O", then "B-X", "I-X" for
// each label X in order.
class BioTags {
 public:
  explicit BioTags(const std::vector<std::string> &entity_labels);

  const std::vector<std::string> &tags() const { return tags_; }
  size_t size() const { return tags_.size(); }
  // npos when unknown.
  size_t Index(std::string_view tag) const;
  bool AllowedStart(size_t tag) const;
  bool Allowed(size_t prev, size_t next) const;
  // 0 where allowed, -inf where not.
  Matrix TransitionMask() const;
  Vec StartMask() const;
  // True when every I-X follows B-X or I-X and all tags are known.
  bool Valid(const std::vector<std::string> &sequence) const;

 private:
  std::vector<std::string> tags_;
};

struct Decoded {
  std::vector<size_t> path;
  double score = 0.0;
  Matrix marginals;         // positions x tags, forward-backward
  Vec confidence;           // marginal of the decoded tag
  Vec margin;               // best minus second-best marginal
};

// Maximizes start[y0] + sum_i emissions(i, y_i) + sum_i transitions(y_{i-1}, y_i).
// -inf entries are never selected when a finite path exists. Ties go to the
// lower tag index.
Decoded ViterbiDecode(const Matrix &emissions, const Matrix &transitions, const Vec &start);

// Score of a fixed path under the same model.
double PathScore(const Matrix &emissions, const Matrix &transitions, const Vec &start,
                 const std::vector<size_t> &path);

}  // namespace weaklab

#endif  // WEAKLAB_MODELS_VITERBI_H_
