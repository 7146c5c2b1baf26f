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


#include "weaklab/trigger/trigger_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "weaklab/core/error.h"

namespace weaklab {

nlohmann::json TriggerConfig::ToJson() const {
  return {{"dim", dim},
          {"margin", margin},
          {"learning_rate", learning_rate},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"negatives_per_trigger", negatives_per_trigger},
          {"threshold_percentile", threshold_percentile},
          {"seed", seed},
          {"threshold", threshold ? nlohmann::json(*threshold) : nlohmann::json(nullptr)}};
}

TriggerConfig TriggerConfig::FromJson(const nlohmann::json &j) {
  TriggerConfig c;
  c.dim = j.value("dim", c.dim);
  c.margin = j.value("margin", c.margin);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.negatives_per_trigger = j.value("negatives_per_trigger", c.negatives_per_trigger);
  c.threshold_percentile = j.value("threshold_percentile", c.threshold_percentile);
  c.seed = j.value("seed", c.seed);
  if (j.contains("threshold") && !j.at("threshold").is_null()) {
    c.threshold = j.at("threshold").get<double>();
    if (!(*c.threshold >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "threshold must be >= 0");
  }
  if (!(c.margin > 0.0)) throw Error(ErrorCode::kInvalidArgument, "margin must be positive");
  if (c.batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch_size must be positive");
  return c;
}

TriggerModel::TriggerModel(std::vector<std::string> labels,
                           const std::vector<std::string> &vocabulary, const Embeddings *pretrained,
                           TriggerConfig config)
    : labels_(std::move(labels)), config_(config) {
  if (labels_.empty()) throw Error(ErrorCode::kInvalidArgument, "trigger model needs labels");
  size_t d = pretrained != nullptr && pretrained->dim() > 0 ? pretrained->dim() : config_.dim;
  config_.dim = d;
  vocab_.push_back("<unk>");
  for (const std::string &w : vocabulary) {
    if (index_.count(w) || w == "<unk>") continue;
    index_[w] = vocab_.size();
    vocab_.push_back(w);
  }
  table_ = Matrix(vocab_.size(), d);
  std::mt19937 rng(config_.seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (size_t r = 0; r < vocab_.size(); ++r) {
    const Vec *v = pretrained != nullptr && r > 0 ? pretrained->Find(vocab_[r]) : nullptr;
    for (size_t c = 0; c < d; ++c) table_(r, c) = v != nullptr ? (*v)[c] : noise(rng);
  }
  attention_.assign(d, 0.0);
  projection_ = Matrix(labels_.size(), d);
  bias_.assign(labels_.size(), 0.0);
}

size_t TriggerModel::Row(const std::string &token) const {
  auto it = index_.find(token);
  return it == index_.end() ? 0 : it->second;
}

std::vector<size_t> TriggerModel::Rows(const std::vector<std::string> &tokens) const {
  if (tokens.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot encode zero tokens");
  std::vector<size_t> rows;
  rows.reserve(tokens.size());
  for (const std::string &t : tokens) rows.push_back(Row(t));
  return rows;
}

Vec TriggerModel::Attention(const std::vector<std::string> &tokens) const {
  std::vector<size_t> rows = Rows(tokens);
  Vec z(rows.size());
  for (size_t t = 0; t < rows.size(); ++t) z[t] = Dot(attention_, table_.Row(rows[t]));
  SoftmaxInPlace(z);
  return z;
}

Vec TriggerModel::Encode(const std::vector<std::string> &tokens) const {
  std::vector<size_t> rows = Rows(tokens);
  Vec alpha = Attention(tokens);
  Vec v(dim(), 0.0);
  for (size_t t = 0; t < rows.size(); ++t) Axpy(alpha[t], table_.Row(rows[t]), v);
  return v;
}

Vec TriggerModel::LabelProbabilities(const Vec &x) const {
  Vec z = bias_;
  for (size_t k = 0; k < labels_.size(); ++k) z[k] += Dot(projection_.Row(k), x);
  SoftmaxInPlace(z);
  return z;
}

void TriggerModel::Accumulate(const std::vector<size_t> &rows, const Vec &alpha, const Vec &v,
                              const Vec &g, TriggerGradients *grads) const {
  const double gv = Dot(g, v);
  for (size_t t = 0; t < rows.size(); ++t) {
    auto e = table_.Row(rows[t]);
    double dz = alpha[t] * (Dot(g, e) - gv);
    auto ge = grads->embeddings.Row(rows[t]);
    Axpy(alpha[t], g, ge);
    Axpy(dz, attention_, ge);
    Axpy(dz, e, grads->attention);
  }
}

double TriggerModel::JointLoss(const std::vector<TriggerPair> &batch,
                               TriggerGradients *grads) const {
  if (batch.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  const double scale = 0.5 / static_cast<double>(batch.size());
  const size_t d = dim();
  if (grads != nullptr) {
    grads->embeddings = Matrix(table_.rows, d);
    grads->attention.assign(d, 0.0);
    grads->projection = Matrix(labels_.size(), d);
    grads->bias.assign(labels_.size(), 0.0);
  }
  double loss = 0.0;
  for (const TriggerPair &pair : batch) {
    if (pair.label >= labels_.size()) throw Error(ErrorCode::kInvalidArgument, "label out of range");
    std::vector<size_t> rt = Rows(*pair.trigger), rs = Rows(*pair.sentence);
    Vec at = Attention(*pair.trigger), as = Attention(*pair.sentence);
    Vec vt = Encode(*pair.trigger), vs = Encode(*pair.sentence);

    Vec p = LabelProbabilities(vt);
    loss += scale * -std::log(std::max(p[pair.label], 1e-300));

    Vec u(d);
    for (size_t c = 0; c < d; ++c) u[c] = vt[c] - vs[c];
    double dist = Norm(u);
    double gu_coef = 0.0;
    if (pair.matched) {
      loss += scale * dist * dist;
      gu_coef = scale * 2.0;
    } else if (dist < config_.margin) {
      double h = config_.margin - dist;
      loss += scale * h * h;
      gu_coef = dist > 0.0 ? scale * -2.0 * h / dist : 0.0;
    }

    if (grads == nullptr) continue;
    Vec gvt(d, 0.0), gvs(d, 0.0);
    for (size_t k = 0; k < labels_.size(); ++k) {
      double dl = scale * (p[k] - (k == pair.label ? 1.0 : 0.0));
      grads->bias[k] += dl;
      Axpy(dl, vt, grads->projection.Row(k));
      Axpy(dl, projection_.Row(k), gvt);
    }
    Axpy(gu_coef, u, gvt);
    Axpy(-gu_coef, u, gvs);
    Accumulate(rt, at, vt, gvt, grads);
    Accumulate(rs, as, vs, gvs, grads);
  }
  return loss;
}

std::vector<double> TriggerModel::Train(const std::vector<TriggerExample> &examples) {
  std::set<size_t> present;
  for (const TriggerExample &e : examples) present.insert(e.label);
  if (present.size() < 2) {
    throw Error(ErrorCode::kDegenerateData, "trigger training needs at least two labels");
  }

  // Negatives are drawn once so the objective is fixed across epochs.
  std::mt19937 rng(config_.seed);
  std::vector<TriggerPair> pairs;
  for (const TriggerExample &e : examples) {
    pairs.push_back({&e.trigger, &e.sentence, e.label, true});
  }
  for (const TriggerExample &e : examples) {
    std::vector<const TriggerExample *> others;
    for (const TriggerExample &o : examples) {
      if (o.label != e.label) others.push_back(&o);
    }
    for (int n = 0; n < config_.negatives_per_trigger; ++n) {
      const TriggerExample *o = others[rng() % others.size()];
      pairs.push_back({&e.trigger, &o->sentence, e.label, false});
    }
  }

  std::vector<double> history = {JointLoss(pairs, nullptr)};
  std::vector<size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  TriggerGradients g;
  const double lr = config_.learning_rate;
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t from = 0; from < order.size(); from += config_.batch_size) {
      std::vector<TriggerPair> batch;
      for (size_t i = from; i < std::min(order.size(), from + config_.batch_size); ++i) {
        batch.push_back(pairs[order[i]]);
      }
      JointLoss(batch, &g);
      Axpy(-lr, g.embeddings.data, table_.data);
      Axpy(-lr, g.attention, attention_);
      Axpy(-lr, g.projection.data, projection_.data);
      Axpy(-lr, g.bias, bias_);
    }
    history.push_back(JointLoss(pairs, nullptr));
  }
  Calibrate(examples);
  return history;
}

void TriggerModel::Calibrate(const std::vector<TriggerExample> &examples) {
  if (config_.threshold) {
    threshold_ = *config_.threshold;
    return;
  }
  std::vector<double> d;
  for (const TriggerExample &e : examples) {
    d.push_back(std::sqrt(SquaredDistance(Encode(e.trigger), Encode(e.sentence))));
  }
  if (d.empty()) return;
  std::sort(d.begin(), d.end());
  double pos = std::clamp(config_.threshold_percentile, 0.0, 100.0) / 100.0 *
               static_cast<double>(d.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(pos));
  size_t hi = std::min(lo + 1, d.size() - 1);
  threshold_ = d[lo] + (pos - static_cast<double>(lo)) * (d[hi] - d[lo]);
}

std::vector<TriggerEntry> TriggerModel::BuildTable(const std::vector<TriggerExample> &examples) const {
  std::vector<TriggerEntry> table;
  std::set<std::pair<std::vector<std::string>, size_t>> seen;
  for (const TriggerExample &e : examples) {
    if (!seen.insert({e.trigger, e.label}).second) continue;
    std::string id = "t" + std::to_string(table.size());
    table.push_back({id, e.trigger, e.label, Encode(e.trigger)});
  }
  return table;
}

std::vector<TriggerMatch> TriggerModel::SoftMatch(const std::vector<std::string> &sentence,
                                                  const std::vector<TriggerEntry> &table) const {
  Vec s = Encode(sentence);
  std::vector<TriggerMatch> out;
  for (const TriggerEntry &e : table) {
    if (e.vector.size() != s.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "trigger vector dimension differs from model");
    }
    double d = std::sqrt(SquaredDistance(e.vector, s));
    if (d <= threshold_) out.push_back({&e, d});
  }
  std::sort(out.begin(), out.end(), [](const TriggerMatch &a, const TriggerMatch &b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.entry->id < b.entry->id;
  });
  return out;
}

nlohmann::json TriggerModel::ToJson() const {
  return {{"format", "weaklab-trigger"}, {"format_version", 1},
          {"labels", labels_},           {"config", config_.ToJson()},
          {"vocab", vocab_},             {"dim", dim()},
          {"table", table_.data},        {"attention", attention_},
          {"projection", projection_.data}, {"bias", bias_},
          {"threshold", threshold_}};
}

TriggerModel TriggerModel::FromJson(const nlohmann::json &j) {
  if (j.value("format", "") != "weaklab-trigger" || j.value("format_version", 0) != 1) {
    throw Error(ErrorCode::kSchemaMismatch, "not a trigger model (format version 1)");
  }
  TriggerModel m;
  m.labels_ = j.at("labels").get<std::vector<std::string>>();
  m.config_ = TriggerConfig::FromJson(j.at("config"));
  m.vocab_ = j.at("vocab").get<std::vector<std::string>>();
  for (size_t i = 1; i < m.vocab_.size(); ++i) m.index_[m.vocab_[i]] = i;
  size_t d = j.at("dim").get<size_t>();
  m.table_ = Matrix(m.vocab_.size(), d);
  m.table_.data = j.at("table").get<Vec>();
  m.attention_ = j.at("attention").get<Vec>();
  m.projection_ = Matrix(m.labels_.size(), d);
  m.projection_.data = j.at("projection").get<Vec>();
  m.bias_ = j.at("bias").get<Vec>();
  m.threshold_ = j.at("threshold").get<double>();
  if (m.table_.data.size() != m.vocab_.size() * d || m.attention_.size() != d ||
      m.projection_.data.size() != m.labels_.size() * d || m.bias_.size() != m.labels_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "trigger model blob has inconsistent shape");
  }
  return m;
}

}  // namespace weaklab
