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


// Trigger matching network. Triggers and sentences are encoded by the same
// attention pooling over token embeddings,
//
//   z_t = a . e_t,   alpha = softmax(z),   v = sum_t alpha_t e_t,
//
// and trained on a joint objective: 0.5 * label NLL of the trigger vector
// under a softmax layer plus 0.5 * margin contrastive loss between trigger
// and sentence vectors (matched: d^2, unmatched: max(0, margin - d)^2).

#ifndef WEAKLAB_TRIGGER_TRIGGER_MODEL_H_
#define WEAKLAB_TRIGGER_TRIGGER_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "weaklab/core/embeddings.h"
#include "weaklab/core/vec.h"

namespace weaklab {

struct TriggerConfig {
  size_t dim = 16;  // ignored when pretrained vectors are given
  double margin = 1.0;
  double learning_rate = 0.05;
  int epochs = 60;
  size_t batch_size = 4;
  int negatives_per_trigger = 1;
  double threshold_percentile = 20.0;
  // Fixed similarity threshold; replaces the percentile when set.
  std::optional<double> threshold;
  uint32_t seed = 13;

  nlohmann::json ToJson() const;
  static TriggerConfig FromJson(const nlohmann::json &j);
};

// One gold trigger with the sentence it was marked in.
struct TriggerExample {
  std::vector<std::string> trigger;   // lowercased tokens
  std::vector<std::string> sentence;  // lowercased tokens
  size_t label = 0;
};

struct TriggerPair {
  const std::vector<std::string> *trigger = nullptr;
  const std::vector<std::string> *sentence = nullptr;
  size_t label = 0;
  bool matched = true;
};

struct TriggerGradients {
  Matrix embeddings;  // same shape as the model's table
  Vec attention;
  Matrix projection;
  Vec bias;
};

struct TriggerEntry {
  std::string id;
  std::vector<std::string> tokens;
  size_t label = 0;
  Vec vector;
};

struct TriggerMatch {
  const TriggerEntry *entry = nullptr;
  double distance = 0.0;
};

class TriggerModel {
 public:
  TriggerModel() = default;
  // Vocabulary is fixed at construction; row 0 is the shared unknown vector.
  // Rows start from `pretrained` where available, otherwise from a seeded
  // small random draw.
  TriggerModel(std::vector<std::string> labels, const std::vector<std::string> &vocabulary,
               const Embeddings *pretrained, TriggerConfig config);

  const std::vector<std::string> &labels() const { return labels_; }
  const TriggerConfig &config() const { return config_; }
  size_t dim() const { return table_.cols; }
  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }

  size_t Row(const std::string &token) const;
  // Attention weights over `tokens`.
  Vec Attention(const std::vector<std::string> &tokens) const;
  Vec Encode(const std::vector<std::string> &tokens) const;
  Vec LabelProbabilities(const Vec &trigger_vector) const;

  // Mean-reduced joint loss; fills `grads` when non-null.
  double JointLoss(const std::vector<TriggerPair> &batch, TriggerGradients *grads) const;

  // Builds matched pairs and seeded negatives (sentences of other labels),
  // then runs minibatch gradient descent. Returns the full-set loss before
  // training and after every epoch, and calibrates the threshold.
  // Throws Error(kDegenerateData) with fewer than two labels present.
  std::vector<double> Train(const std::vector<TriggerExample> &examples);

  // Sets the threshold to the configured percentile of matched distances.
  void Calibrate(const std::vector<TriggerExample> &examples);

  std::vector<TriggerEntry> BuildTable(const std::vector<TriggerExample> &examples) const;

  // Entries with distance <= threshold, nearest first (ties by id).
  std::vector<TriggerMatch> SoftMatch(const std::vector<std::string> &sentence,
                                      const std::vector<TriggerEntry> &table) const;

  // Parameter access for gradient checks.
  Matrix &table() { return table_; }
  const Matrix &table() const { return table_; }
  Vec &attention() { return attention_; }
  Matrix &projection() { return projection_; }
  Vec &bias() { return bias_; }

  nlohmann::json ToJson() const;
  static TriggerModel FromJson(const nlohmann::json &j);

 private:
  std::vector<size_t> Rows(const std::vector<std::string> &tokens) const;
  void Accumulate(const std::vector<size_t> &rows, const Vec &alpha, const Vec &v, const Vec &g,
                  TriggerGradients *grads) const;

  std::vector<std::string> labels_;
  TriggerConfig config_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, size_t> index_;
  Matrix table_;
  Vec attention_;
  Matrix projection_;
  Vec bias_;
  double threshold_ = 0.0;
};

}  // namespace weaklab

#endif  // WEAKLAB_TRIGGER_TRIGGER_MODEL_H_
