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


#include "weaklab/models/metrics.h"

#include <algorithm>
#include <map>
#include <set>

#include "weaklab/core/error.h"

namespace weaklab {
namespace {

double Ratio(int a, int b) { return b == 0 ? 0.0 : static_cast<double>(a) / b; }

void Finish(EvalReport *r) {
  int tp = 0, fp = 0, fn = 0;
  double sum = 0.0;
  for (LabelScore &s : r->per_label) {
    s.precision = Ratio(s.tp, s.tp + s.fp);
    s.recall = Ratio(s.tp, s.tp + s.fn);
    s.f1 = s.precision + s.recall == 0.0 ? 0.0
                                         : 2 * s.precision * s.recall / (s.precision + s.recall);
    sum += s.f1;
    tp += s.tp;
    fp += s.fp;
    fn += s.fn;
  }
  r->macro_f1 = r->per_label.empty() ? 0.0 : sum / static_cast<double>(r->per_label.size());
  double p = Ratio(tp, tp + fp), rc = Ratio(tp, tp + fn);
  r->micro_f1 = p + rc == 0.0 ? 0.0 : 2 * p * rc / (p + rc);
}

}  // namespace

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json labels = nlohmann::json::array();
  for (const LabelScore &s : per_label) {
    labels.push_back({{"label", s.label},
                      {"precision", s.precision},
                      {"recall", s.recall},
                      {"f1", s.f1},
                      {"tp", s.tp},
                      {"fp", s.fp},
                      {"fn", s.fn}});
  }
  return {{"per_label", labels}, {"macro_f1", macro_f1}, {"micro_f1", micro_f1}, {"support", support}};
}

EvalReport EvaluateClassification(const std::vector<std::string> &gold,
                                  const std::vector<std::string> &predicted,
                                  const std::vector<std::string> &scored) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::kInvalidArgument, "gold and predicted lengths differ");
  }
  EvalReport r;
  std::map<std::string, size_t> row;
  for (const std::string &l : scored) {
    row[l] = r.per_label.size();
    r.per_label.push_back({l});
  }
  for (size_t i = 0; i < gold.size(); ++i) {
    auto g = row.find(gold[i]);
    auto p = row.find(predicted[i]);
    if (gold[i] == predicted[i]) {
      if (g != row.end()) ++r.per_label[g->second].tp;
      continue;
    }
    if (g != row.end()) ++r.per_label[g->second].fn;
    if (p != row.end()) ++r.per_label[p->second].fp;
  }
  r.support = static_cast<int>(gold.size());
  Finish(&r);
  return r;
}

std::vector<LabeledSpan> BioToSpans(const std::vector<std::string> &tags) {
  std::vector<LabeledSpan> out;
  for (size_t i = 0; i < tags.size(); ++i) {
    const std::string &t = tags[i];
    if (t.size() < 2 || t[1] != '-') continue;
    std::string label = t.substr(2);
    bool continues = t[0] == 'I' && !out.empty() && out.back().end == i && out.back().label == label;
    if (continues) {
      out.back().end = i + 1;
    } else {
      out.push_back({i, i + 1, label});
    }
  }
  return out;
}

EvalReport EvaluateSpans(const std::vector<std::vector<LabeledSpan>> &gold,
                         const std::vector<std::vector<LabeledSpan>> &predicted,
                         const std::vector<std::string> &labels) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::kInvalidArgument, "gold and predicted lengths differ");
  }
  EvalReport r;
  std::map<std::string, size_t> row;
  for (const std::string &l : labels) {
    row[l] = r.per_label.size();
    r.per_label.push_back({l});
  }
  for (size_t i = 0; i < gold.size(); ++i) {
    std::set<LabeledSpan> g(gold[i].begin(), gold[i].end());
    std::set<LabeledSpan> p(predicted[i].begin(), predicted[i].end());
    for (const LabeledSpan &s : g) {
      auto it = row.find(s.label);
      if (it == row.end()) continue;
      ++r.support;
      if (p.count(s)) {
        ++r.per_label[it->second].tp;
      } else {
        ++r.per_label[it->second].fn;
      }
    }
    for (const LabeledSpan &s : p) {
      auto it = row.find(s.label);
      if (it != row.end() && !g.count(s)) ++r.per_label[it->second].fp;
    }
  }
  Finish(&r);
  return r;
}

}  // namespace weaklab
