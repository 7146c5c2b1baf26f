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


#ifndef WEAKLAB_MODELS_METRICS_H_
#define WEAKLAB_MODELS_METRICS_H_

#include <string>
#include <vector>

#include "json.hpp"

namespace weaklab {

struct LabelScore {
  std::string label;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::vector<LabelScore> per_label;
  double macro_f1 = 0.0;  // unweighted mean over `per_label`
  double micro_f1 = 0.0;
  int support = 0;

  nlohmann::json ToJson() const;
};

// Per-label scores over parallel gold/predicted label lists. Only labels in
// `scored` get a row; a prediction outside it still counts against recall.
EvalReport EvaluateClassification(const std::vector<std::string> &gold,
                                  const std::vector<std::string> &predicted,
                                  const std::vector<std::string> &scored);

struct LabeledSpan {
  size_t start = 0;
  size_t end = 0;
  std::string label;
  bool operator==(const LabeledSpan &) const = default;
  auto operator<=>(const LabeledSpan &) const = default;
};

// Entity spans of a BIO sequence. A stray I-X opens a new span.
std::vector<LabeledSpan> BioToSpans(const std::vector<std::string> &tags);

// Exact-match entity scoring over sentences.
EvalReport EvaluateSpans(const std::vector<std::vector<LabeledSpan>> &gold,
                         const std::vector<std::vector<LabeledSpan>> &predicted,
                         const std::vector<std::string> &labels);

}  // namespace weaklab

#endif  // WEAKLAB_MODELS_METRICS_H_
