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


// BIO sequence labeler: averaged structured perceptron over sparse token
// features with hard BIO transition constraints.

#ifndef WEAKLAB_MODELS_SEQUENCE_LABELER_H_
#define WEAKLAB_MODELS_SEQUENCE_LABELER_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "weaklab/models/features.h"
#include "weaklab/models/viterbi.h"

namespace weaklab {

struct SequenceExample {
  FeatureSeq tokens;
  std::vector<std::string> tags;  // BIO tags, same length as tokens
  double weight = 1.0;
};

struct SequencePrediction {
  std::vector<std::string> tags;
  Decoded decoded;
};

class SequenceLabeler {
 public:
  SequenceLabeler() : SequenceLabeler(std::vector<std::string>{}) {}
  explicit SequenceLabeler(std::vector<std::string> entity_labels);

  const std::vector<std::string> &entity_labels() const { return entity_labels_; }
  const BioTags &tags() const { return tags_; }

  Matrix Emissions(const FeatureSeq &x) const;
  SequencePrediction Predict(const FeatureSeq &x) const;

  // Weighted averaged perceptron, examples visited in a seeded shuffle.
  // Throws Error(kInvalidBio) if any target is not BIO-valid.
  void Train(const std::vector<SequenceExample> &examples, int epochs, uint32_t seed);

  // Euclidean norm of the parameter difference.
  double Distance(const SequenceLabeler &other) const;

  const std::unordered_map<uint64_t, Vec> &weights() const { return w_; }
  const Matrix &transitions() const { return trans_; }
  const Vec &start() const { return start_; }

  nlohmann::json ToJson() const;
  static SequenceLabeler FromJson(const nlohmann::json &j);

 private:
  std::vector<std::string> entity_labels_;
  BioTags tags_;
  std::unordered_map<uint64_t, Vec> w_;
  Matrix trans_;  // learned part; the BIO mask is added at decode time
  Vec start_;
  Matrix mask_;
  Vec start_mask_;
};

}  // namespace weaklab

#endif  // WEAKLAB_MODELS_SEQUENCE_LABELER_H_
