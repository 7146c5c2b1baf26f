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


#include "weaklab/models/recommender.h"

#include <chrono>
#include <random>

#include "weaklab/core/error.h"

namespace weaklab {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

nlohmann::json FeaturesToJson(const FeatureVec &f) {
  nlohmann::json out = nlohmann::json::array();
  for (const Feature &x : f) out.push_back({x.id, x.value});
  return out;
}

FeatureVec FeaturesFromJson(const nlohmann::json &j) {
  FeatureVec f;
  for (const auto &x : j) f.push_back({x.at(0).get<uint64_t>(), x.at(1).get<double>()});
  return f;
}

}  // namespace

nlohmann::json RecommenderConfig::ToJson() const {
  return {{"weak_weight", weak_weight},         {"reservoir_size", reservoir_size},
          {"online_epochs", online_epochs},     {"labeler_epochs", labeler_epochs},
          {"classifier_epochs", classifier_epochs}, {"learning_rate", learning_rate},
          {"l2", l2},                           {"time_budget_seconds", time_budget_seconds},
          {"seed", seed}};
}

RecommenderConfig RecommenderConfig::FromJson(const nlohmann::json &j) {
  RecommenderConfig c;
  c.weak_weight = j.value("weak_weight", c.weak_weight);
  c.reservoir_size = j.value("reservoir_size", c.reservoir_size);
  c.online_epochs = j.value("online_epochs", c.online_epochs);
  c.labeler_epochs = j.value("labeler_epochs", c.labeler_epochs);
  c.classifier_epochs = j.value("classifier_epochs", c.classifier_epochs);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.l2 = j.value("l2", c.l2);
  c.time_budget_seconds = j.value("time_budget_seconds", c.time_budget_seconds);
  c.seed = j.value("seed", c.seed);
  if (!(c.weak_weight > 0.0 && c.weak_weight <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "weak_weight must lie in (0, 1]");
  }
  return c;
}

Recommender::Recommender(TaskKind task, std::vector<std::string> labels, size_t classifier_dim,
                         RecommenderConfig config)
    : task_(task), labels_(std::move(labels)), config_(config) {
  if (labels_.empty()) throw Error(ErrorCode::kInvalidArgument, "recommender needs labels");
  if (task_ == TaskKind::kSequenceLabeling) {
    labeler_ = SequenceLabeler(labels_);
  } else {
    classifier_ = Classifier(labels_, classifier_dim, config_.l2);
  }
}

void Recommender::CheckSchema(const std::vector<ClassExample> &batch) const {
  if (task_ == TaskKind::kSequenceLabeling) {
    throw Error(ErrorCode::kSchemaMismatch, "sequence model given class examples");
  }
  for (const ClassExample &e : batch) {
    if (e.target >= labels_.size()) throw Error(ErrorCode::kSchemaMismatch, "unknown class label");
  }
}

void Recommender::CheckSchema(const std::vector<SequenceExample> &batch) const {
  if (task_ != TaskKind::kSequenceLabeling) {
    throw Error(ErrorCode::kSchemaMismatch, "classification model given sequence examples");
  }
  for (const SequenceExample &e : batch) {
    for (const std::string &t : e.tags) {
      if (labeler_.tags().Index(t) == std::string::npos) {
        throw Error(ErrorCode::kSchemaMismatch, "unknown tag " + t);
      }
    }
  }
}

template <typename T>
void Recommender::Offer(const std::vector<T> &batch, std::vector<T> *reservoir) {
  std::mt19937_64 rng(config_.seed ^ (seen_ * 0x9E3779B97F4A7C15ULL));
  for (const T &e : batch) {
    ++seen_;
    if (reservoir->size() < config_.reservoir_size) {
      reservoir->push_back(e);
      continue;
    }
    uint64_t j = rng() % seen_;
    if (j < config_.reservoir_size) (*reservoir)[j] = e;
  }
}

Recommender Recommender::Retrain(const std::vector<ClassExample> &examples) const {
  CheckSchema(examples);
  Recommender next = *this;
  next.classifier_ = Classifier(labels_, classifier_.dim(), config_.l2);
  next.classifier_.Train(examples, config_.classifier_epochs, config_.learning_rate);
  next.class_reservoir_.clear();
  next.seen_ = 0;
  next.Offer(examples, &next.class_reservoir_);
  ++next.version_;
  return next;
}

Recommender Recommender::Retrain(const std::vector<SequenceExample> &examples) const {
  CheckSchema(examples);
  Recommender next = *this;
  next.labeler_ = SequenceLabeler(labels_);
  next.labeler_.Train(examples, config_.labeler_epochs, config_.seed);
  next.seq_reservoir_.clear();
  next.seen_ = 0;
  next.Offer(examples, &next.seq_reservoir_);
  ++next.version_;
  return next;
}

Recommender Recommender::OnlineUpdate(const std::vector<ClassExample> &batch) const {
  CheckSchema(batch);
  if (batch.empty()) return *this;
  Recommender next = *this;
  std::vector<ClassExample> data = batch;
  data.insert(data.end(), class_reservoir_.begin(), class_reservoir_.end());
  auto start = Clock::now();
  for (int epoch = 0; epoch < config_.online_epochs; ++epoch) {
    next.classifier_.Train(data, 1, config_.learning_rate);
    if (Seconds(start) > config_.time_budget_seconds) break;
  }
  next.Offer(batch, &next.class_reservoir_);
  ++next.version_;
  return next;
}

Recommender Recommender::OnlineUpdate(const std::vector<SequenceExample> &batch) const {
  CheckSchema(batch);
  if (batch.empty()) return *this;
  Recommender next = *this;
  std::vector<SequenceExample> data = batch;
  data.insert(data.end(), seq_reservoir_.begin(), seq_reservoir_.end());
  auto start = Clock::now();
  for (int epoch = 0; epoch < config_.online_epochs; ++epoch) {
    next.labeler_.Train(data, 1, config_.seed + static_cast<uint32_t>(version_ * 131 + epoch));
    if (Seconds(start) > config_.time_budget_seconds) break;
  }
  next.Offer(batch, &next.seq_reservoir_);
  ++next.version_;
  return next;
}

nlohmann::json Recommender::ToJson() const {
  nlohmann::json j = {{"format", "weaklab-recommender"},
                      {"format_version", 1},
                      {"task", TaskName(task_)},
                      {"labels", labels_},
                      {"config", config_.ToJson()},
                      {"version", version_},
                      {"seen", seen_}};
  nlohmann::json reservoir = nlohmann::json::array();
  if (task_ == TaskKind::kSequenceLabeling) {
    j["labeler"] = labeler_.ToJson();
    for (const SequenceExample &e : seq_reservoir_) {
      nlohmann::json toks = nlohmann::json::array();
      for (const FeatureVec &f : e.tokens) toks.push_back(FeaturesToJson(f));
      reservoir.push_back({{"tokens", toks}, {"tags", e.tags}, {"weight", e.weight}});
    }
  } else {
    j["classifier"] = classifier_.ToJson();
    for (const ClassExample &e : class_reservoir_) {
      reservoir.push_back(
          {{"features", FeaturesToJson(e.features)}, {"target", e.target}, {"weight", e.weight}});
    }
  }
  j["reservoir"] = reservoir;
  return j;
}

Recommender Recommender::FromJson(const nlohmann::json &j) {
  if (j.value("format", "") != "weaklab-recommender" || j.value("format_version", 0) != 1) {
    throw Error(ErrorCode::kSchemaMismatch, "not a recommender snapshot (format version 1)");
  }
  Recommender r;
  r.task_ = *TaskFromName(j.at("task").get<std::string>());
  r.labels_ = j.at("labels").get<std::vector<std::string>>();
  r.config_ = RecommenderConfig::FromJson(j.at("config"));
  r.version_ = j.at("version").get<uint64_t>();
  r.seen_ = j.at("seen").get<uint64_t>();
  if (r.task_ == TaskKind::kSequenceLabeling) {
    r.labeler_ = SequenceLabeler::FromJson(j.at("labeler"));
    for (const auto &e : j.at("reservoir")) {
      SequenceExample x;
      for (const auto &f : e.at("tokens")) x.tokens.push_back(FeaturesFromJson(f));
      x.tags = e.at("tags").get<std::vector<std::string>>();
      x.weight = e.at("weight").get<double>();
      r.seq_reservoir_.push_back(std::move(x));
    }
  } else {
    r.classifier_ = Classifier::FromJson(j.at("classifier"));
    for (const auto &e : j.at("reservoir")) {
      r.class_reservoir_.push_back({FeaturesFromJson(e.at("features")), e.at("target").get<size_t>(),
                                    e.at("weight").get<double>()});
    }
  }
  return r;
}

}  // namespace weaklab
