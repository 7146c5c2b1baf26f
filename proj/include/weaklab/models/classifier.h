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


// Weighted multinomial logistic regression for sentence-level tasks.

#ifndef WEAKLAB_MODELS_CLASSIFIER_H_
#define WEAKLAB_MODELS_CLASSIFIER_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "weaklab/core/vec.h"
#include "weaklab/models/features.h"

namespace weaklab {

struct ClassExample {
  FeatureVec features;
  size_t target = 0;
  double weight = 1.0;  // gold 1.0, weak examples less
};

struct ClassPrediction {
  size_t label = 0;
  double confidence = 0.0;  // probability of `label`
  Vec probabilities;
};

class Classifier {
 public:
  Classifier() = default;
  Classifier(std::vector<std::string> labels, size_t dim, double l2 = 1e-4);

  const std::vector<std::string> &labels() const { return labels_; }
  size_t dim() const { return dim_; }
  double l2() const { return l2_; }

  Vec Logits(const FeatureVec &x) const;
  Vec Probabilities(const FeatureVec &x) const;
  ClassPrediction Predict(const FeatureVec &x) const;

  // J = sum_i w_i * -log p(y_i | x_i) + l2/2 * |W|^2. The sum (not mean)
  // makes an example of weight 2 identical to two copies of weight 1.
  double Objective(const std::vector<ClassExample> &examples) const;
  // Returns J and writes dJ/dW (labels x dim) and dJ/db.
  double Gradient(const std::vector<ClassExample> &examples, Matrix *grad_w, Vec *grad_b) const;

  // Full-batch gradient descent with step lr / max(1, sum of weights),
  // halving the step until J does not increase. Returns J before each epoch
  // and after the last. Throws Error(kDimensionMismatch) for out-of-range
  // feature ids.
  std::vector<double> Train(const std::vector<ClassExample> &examples, int epochs, double lr);

  Matrix &weights() { return w_; }
  const Matrix &weights() const { return w_; }
  Vec &bias() { return b_; }
  const Vec &bias() const { return b_; }

  nlohmann::json ToJson() const;
  static Classifier FromJson(const nlohmann::json &j);

  bool operator==(const Classifier &) const = default;

 private:
  void CheckExamples(const std::vector<ClassExample> &examples) const;

  std::vector<std::string> labels_;
  size_t dim_ = 0;
  double l2_ = 1e-4;
  Matrix w_;
  Vec b_;
};

}  // namespace weaklab

#endif  // WEAKLAB_MODELS_CLASSIFIER_H_
