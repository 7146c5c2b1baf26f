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


#include "weaklab/models/classifier.h"

#include <algorithm>
#include <cmath>

#include "weaklab/core/error.h"

namespace weaklab {

Classifier::Classifier(std::vector<std::string> labels, size_t dim, double l2)
    : labels_(std::move(labels)), dim_(dim), l2_(l2), w_(labels_.size(), dim), b_(labels_.size(), 0.0) {
  if (labels_.empty()) throw Error(ErrorCode::kInvalidArgument, "classifier needs labels");
}

Vec Classifier::Logits(const FeatureVec &x) const {
  Vec z = b_;
  for (const Feature &f : x) {
    if (f.id >= dim_) throw Error(ErrorCode::kDimensionMismatch, "feature id out of range");
    for (size_t k = 0; k < labels_.size(); ++k) z[k] += w_(k, f.id) * f.value;
  }
  return z;
}

Vec Classifier::Probabilities(const FeatureVec &x) const {
  Vec z = Logits(x);
  SoftmaxInPlace(z);
  return z;
}

ClassPrediction Classifier::Predict(const FeatureVec &x) const {
  ClassPrediction p;
  p.probabilities = Probabilities(x);
  p.label = static_cast<size_t>(std::max_element(p.probabilities.begin(), p.probabilities.end()) -
                                p.probabilities.begin());
  p.confidence = p.probabilities[p.label];
  return p;
}

void Classifier::CheckExamples(const std::vector<ClassExample> &examples) const {
  for (const ClassExample &e : examples) {
    if (e.target >= labels_.size()) throw Error(ErrorCode::kInvalidArgument, "target out of range");
    if (!(e.weight > 0.0)) throw Error(ErrorCode::kInvalidArgument, "example weight must be positive");
    for (const Feature &f : e.features) {
      if (f.id >= dim_) throw Error(ErrorCode::kDimensionMismatch, "feature id out of range");
    }
  }
}

double Classifier::Objective(const std::vector<ClassExample> &examples) const {
  CheckExamples(examples);
  double j = 0.0;
  for (const ClassExample &e : examples) {
    Vec z = Logits(e.features);
    double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - m);
    j += e.weight * (m + std::log(s) - z[e.target]);
  }
  double sq = 0.0;
  for (double v : w_.data) sq += v * v;
  return j + 0.5 * l2_ * sq;
}

double Classifier::Gradient(const std::vector<ClassExample> &examples, Matrix *grad_w,
                            Vec *grad_b) const {
  CheckExamples(examples);
  *grad_w = Matrix(labels_.size(), dim_);
  grad_b->assign(labels_.size(), 0.0);
  double j = 0.0;
  for (const ClassExample &e : examples) {
    Vec p = Logits(e.features);
    double m = *std::max_element(p.begin(), p.end());
    double s = 0.0;
    for (double v : p) s += std::exp(v - m);
    j += e.weight * (m + std::log(s) - p[e.target]);
    SoftmaxInPlace(p);
    p[e.target] -= 1.0;
    for (size_t k = 0; k < labels_.size(); ++k) {
      double r = e.weight * p[k];
      (*grad_b)[k] += r;
      for (const Feature &f : e.features) (*grad_w)(k, f.id) += r * f.value;
    }
  }
  double sq = 0.0;
  for (size_t i = 0; i < w_.data.size(); ++i) {
    sq += w_.data[i] * w_.data[i];
    grad_w->data[i] += l2_ * w_.data[i];
  }
  return j + 0.5 * l2_ * sq;
}

std::vector<double> Classifier::Train(const std::vector<ClassExample> &examples, int epochs,
                                      double lr) {
  std::vector<double> history;
  if (examples.empty()) return history;
  double total = 0.0;
  for (const ClassExample &e : examples) total += e.weight;
  double step = lr / std::max(1.0, total);
  Matrix gw;
  Vec gb;
  double j = Gradient(examples, &gw, &gb);
  history.push_back(j);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Matrix w0 = w_;
    Vec b0 = b_;
    double trial = step;
    double next = j;
    bool moved = false;
    for (int halvings = 0; halvings < 30; ++halvings) {
      for (size_t i = 0; i < w_.data.size(); ++i) w_.data[i] = w0.data[i] - trial * gw.data[i];
      for (size_t k = 0; k < b_.size(); ++k) b_[k] = b0[k] - trial * gb[k];
      next = Objective(examples);
      if (next <= j) {
        moved = true;
        break;
      }
      trial *= 0.5;
    }
    if (!moved) {
      w_ = std::move(w0);
      b_ = std::move(b0);
      history.push_back(j);
      break;
    }
    j = Gradient(examples, &gw, &gb);
    history.push_back(j);
  }
  return history;
}

nlohmann::json Classifier::ToJson() const {
  return {{"labels", labels_}, {"dim", dim_}, {"l2", l2_}, {"weights", w_.data}, {"bias", b_}};
}

Classifier Classifier::FromJson(const nlohmann::json &j) {
  Classifier c(j.at("labels").get<std::vector<std::string>>(), j.at("dim").get<size_t>(),
               j.at("l2").get<double>());
  c.w_.data = j.at("weights").get<Vec>();
  c.b_ = j.at("bias").get<Vec>();
  if (c.w_.data.size() != c.labels_.size() * c.dim_ || c.b_.size() != c.labels_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "classifier blob has inconsistent shape");
  }
  return c;
}

}  // namespace weaklab
