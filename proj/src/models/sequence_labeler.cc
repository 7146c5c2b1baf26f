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


#include "weaklab/models/sequence_labeler.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "weaklab/core/error.h"

namespace weaklab {

SequenceLabeler::SequenceLabeler(std::vector<std::string> entity_labels)
    : entity_labels_(std::move(entity_labels)),
      tags_(entity_labels_),
      trans_(tags_.size(), tags_.size()),
      start_(tags_.size(), 0.0),
      mask_(tags_.TransitionMask()),
      start_mask_(tags_.StartMask()) {}

Matrix SequenceLabeler::Emissions(const FeatureSeq &x) const {
  Matrix e(x.size(), tags_.size());
  for (size_t i = 0; i < x.size(); ++i) {
    for (const Feature &f : x[i]) {
      auto it = w_.find(f.id);
      if (it == w_.end()) continue;
      for (size_t k = 0; k < tags_.size(); ++k) e(i, k) += it->second[k] * f.value;
    }
  }
  return e;
}

SequencePrediction SequenceLabeler::Predict(const FeatureSeq &x) const {
  SequencePrediction p;
  if (x.empty()) return p;
  Matrix t = trans_;
  for (size_t i = 0; i < t.data.size(); ++i) t.data[i] += mask_.data[i];
  Vec s = start_;
  for (size_t i = 0; i < s.size(); ++i) s[i] += start_mask_[i];
  p.decoded = ViterbiDecode(Emissions(x), t, s);
  for (size_t k : p.decoded.path) p.tags.push_back(tags_.tags()[k]);
  return p;
}

void SequenceLabeler::Train(const std::vector<SequenceExample> &examples, int epochs,
                            uint32_t seed) {
  for (const SequenceExample &e : examples) {
    if (e.tags.size() != e.tokens.size()) {
      throw Error(ErrorCode::kInvalidArgument, "tag count does not match token count");
    }
    if (!tags_.Valid(e.tags)) throw Error(ErrorCode::kInvalidBio, "target is not a valid BIO sequence");
    if (!(e.weight > 0.0)) throw Error(ErrorCode::kInvalidArgument, "example weight must be positive");
  }
  if (examples.empty() || epochs <= 0) return;

  const size_t L = tags_.size();
  // Averaging: after each update at step c, u accumulates c * delta; the
  // average is w - u / c.
  std::unordered_map<uint64_t, Vec> u;
  Matrix ut(L, L);
  Vec us(L, 0.0);
  double c = 1.0;

  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937 rng(seed);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t idx : order) {
      const SequenceExample &e = examples[idx];
      std::vector<size_t> gold;
      for (const std::string &t : e.tags) gold.push_back(tags_.Index(t));
      std::vector<size_t> pred = e.tokens.empty() ? gold : Predict(e.tokens).decoded.path;
      if (pred != gold) {
        const double a = e.weight;
        for (size_t i = 0; i < gold.size(); ++i) {
          if (gold[i] != pred[i]) {
            for (const Feature &f : e.tokens[i]) {
              Vec &w = w_.try_emplace(f.id, Vec(L, 0.0)).first->second;
              Vec &acc = u.try_emplace(f.id, Vec(L, 0.0)).first->second;
              w[gold[i]] += a * f.value;
              w[pred[i]] -= a * f.value;
              acc[gold[i]] += c * a * f.value;
              acc[pred[i]] -= c * a * f.value;
            }
          }
          if (i == 0) {
            if (gold[0] != pred[0]) {
              start_[gold[0]] += a;
              start_[pred[0]] -= a;
              us[gold[0]] += c * a;
              us[pred[0]] -= c * a;
            }
          } else if (gold[i - 1] != pred[i - 1] || gold[i] != pred[i]) {
            trans_(gold[i - 1], gold[i]) += a;
            trans_(pred[i - 1], pred[i]) -= a;
            ut(gold[i - 1], gold[i]) += c * a;
            ut(pred[i - 1], pred[i]) -= c * a;
          }
        }
      }
      c += 1.0;
    }
  }
  for (auto &[id, acc] : u) {
    Vec &w = w_[id];
    for (size_t k = 0; k < L; ++k) w[k] -= acc[k] / c;
  }
  for (size_t i = 0; i < trans_.data.size(); ++i) trans_.data[i] -= ut.data[i] / c;
  for (size_t k = 0; k < L; ++k) start_[k] -= us[k] / c;
}

double SequenceLabeler::Distance(const SequenceLabeler &other) const {
  double sq = 0.0;
  const size_t L = tags_.size();
  for (const auto &[id, w] : w_) {
    auto it = other.w_.find(id);
    for (size_t k = 0; k < L; ++k) {
      double d = w[k] - (it == other.w_.end() ? 0.0 : it->second[k]);
      sq += d * d;
    }
  }
  for (const auto &[id, w] : other.w_) {
    if (w_.count(id)) continue;
    for (double v : w) sq += v * v;
  }
  sq += SquaredDistance(trans_.data, other.trans_.data);
  sq += SquaredDistance(start_, other.start_);
  return std::sqrt(sq);
}

nlohmann::json SequenceLabeler::ToJson() const {
  std::vector<uint64_t> ids;
  for (const auto &[id, _] : w_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  nlohmann::json weights = nlohmann::json::array();
  for (uint64_t id : ids) weights.push_back({{"id", id}, {"w", w_.at(id)}});
  return {{"entity_labels", entity_labels_},
          {"transitions", trans_.data},
          {"start", start_},
          {"weights", weights}};
}

SequenceLabeler SequenceLabeler::FromJson(const nlohmann::json &j) {
  SequenceLabeler s(j.at("entity_labels").get<std::vector<std::string>>());
  s.trans_.data = j.at("transitions").get<Vec>();
  s.start_ = j.at("start").get<Vec>();
  const size_t L = s.tags_.size();
  if (s.trans_.data.size() != L * L || s.start_.size() != L) {
    throw Error(ErrorCode::kDimensionMismatch, "labeler blob has inconsistent shape");
  }
  for (const auto &e : j.at("weights")) {
    Vec w = e.at("w").get<Vec>();
    if (w.size() != L) throw Error(ErrorCode::kDimensionMismatch, "labeler blob has inconsistent shape");
    s.w_[e.at("id").get<uint64_t>()] = std::move(w);
  }
  return s;
}

}  // namespace weaklab
