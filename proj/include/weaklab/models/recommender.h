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


// Versioned recommender snapshot: one downstream model per task, trained
// on gold plus down-weighted weak examples and updated online with a
// bounded replay reservoir. Instances are immutable once published;
// updates return a new instance with version + 1.

#ifndef WEAKLAB_MODELS_RECOMMENDER_H_
#define WEAKLAB_MODELS_RECOMMENDER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "weaklab/core/types.h"
#include "weaklab/models/classifier.h"
#include "weaklab/models/sequence_labeler.h"

namespace weaklab {

struct RecommenderConfig {
  double weak_weight = 0.3;
  size_t reservoir_size = 1000;
  int online_epochs = 5;
  int labeler_epochs = 20;
  int classifier_epochs = 150;
  double learning_rate = 2.0;
  double l2 = 1e-3;
  double time_budget_seconds = 30.0;
  uint32_t seed = 17;

  nlohmann::json ToJson() const;
  static RecommenderConfig FromJson(const nlohmann::json &j);
};

class Recommender {
 public:
  Recommender() = default;
  // `labels` are model labels: entity labels for sequence labeling,
  // class labels otherwise.
  Recommender(TaskKind task, std::vector<std::string> labels, size_t classifier_dim,
              RecommenderConfig config);

  TaskKind task() const { return task_; }
  uint64_t version() const { return version_; }
  bool trained() const { return version_ > 0; }
  const RecommenderConfig &config() const { return config_; }
  const std::vector<std::string> &labels() const { return labels_; }
  const Classifier &classifier() const { return classifier_; }
  const SequenceLabeler &labeler() const { return labeler_; }
  size_t reservoir_count() const { return class_reservoir_.size() + seq_reservoir_.size(); }

  // Retrains from scratch. The reservoir is refilled from `examples`.
  Recommender Retrain(const std::vector<ClassExample> &examples) const;
  Recommender Retrain(const std::vector<SequenceExample> &examples) const;

  // A bounded number of epochs over `batch` plus the replay reservoir.
  // An empty batch returns an identical snapshot. Throws
  // Error(kSchemaMismatch) when the batch uses labels the model lacks.
  Recommender OnlineUpdate(const std::vector<ClassExample> &batch) const;
  Recommender OnlineUpdate(const std::vector<SequenceExample> &batch) const;

  ClassPrediction PredictClass(const FeatureVec &x) const { return classifier_.Predict(x); }
  SequencePrediction PredictSequence(const FeatureSeq &x) const { return labeler_.Predict(x); }

  nlohmann::json ToJson() const;
  static Recommender FromJson(const nlohmann::json &j);

 private:
  void CheckSchema(const std::vector<ClassExample> &batch) const;
  void CheckSchema(const std::vector<SequenceExample> &batch) const;
  template <typename T>
  void Offer(const std::vector<T> &batch, std::vector<T> *reservoir);

  TaskKind task_ = TaskKind::kSentimentAnalysis;
  std::vector<std::string> labels_;
  RecommenderConfig config_;
  uint64_t version_ = 0;
  uint64_t seen_ = 0;  // examples offered to the reservoir so far
  Classifier classifier_;
  SequenceLabeler labeler_;
  std::vector<ClassExample> class_reservoir_;
  std::vector<SequenceExample> seq_reservoir_;
};

}  // namespace weaklab

#endif  // WEAKLAB_MODELS_RECOMMENDER_H_
