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


#include "weaklab/models/viterbi.h"

#include <algorithm>
#include <cmath>

#include "weaklab/core/error.h"

namespace weaklab {
namespace {

double LogSumExp(const Vec &v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

BioTags::BioTags(const std::vector<std::string> &entity_labels) {
  tags_.push_back("O");
  for (const std::string &l : entity_labels) {
    tags_.push_back("B-" + l);
    tags_.push_back("I-" + l);
  }
}

size_t BioTags::Index(std::string_view tag) const {
  auto it = std::find(tags_.begin(), tags_.end(), tag);
  return it == tags_.end() ? std::string::npos : static_cast<size_t>(it - tags_.begin());
}

bool BioTags::AllowedStart(size_t tag) const { return tag == 0 || tag % 2 == 1; }

bool BioTags::Allowed(size_t prev, size_t next) const {
  if (next == 0 || next % 2 == 1) return true;
  // I-X needs B-X or I-X before it.
  return prev != 0 && (prev + 1) / 2 == next / 2;
}

Matrix BioTags::TransitionMask() const {
  Matrix m(size(), size());
  for (size_t a = 0; a < size(); ++a) {
    for (size_t b = 0; b < size(); ++b) m(a, b) = Allowed(a, b) ? 0.0 : kNegInf;
  }
  return m;
}

Vec BioTags::StartMask() const {
  Vec v(size());
  for (size_t a = 0; a < size(); ++a) v[a] = AllowedStart(a) ? 0.0 : kNegInf;
  return v;
}

bool BioTags::Valid(const std::vector<std::string> &sequence) const {
  size_t prev = std::string::npos;
  for (const std::string &t : sequence) {
    size_t i = Index(t);
    if (i == std::string::npos) return false;
    if (prev == std::string::npos ? !AllowedStart(i) : !Allowed(prev, i)) return false;
    prev = i;
  }
  return true;
}

Decoded ViterbiDecode(const Matrix &emissions, const Matrix &transitions, const Vec &start) {
  const size_t n = emissions.rows;
  const size_t L = emissions.cols;
  if (n == 0 || L == 0) throw Error(ErrorCode::kInvalidArgument, "empty emission matrix");
  if (transitions.rows != L || transitions.cols != L || start.size() != L) {
    throw Error(ErrorCode::kDimensionMismatch, "transition shape does not match emissions");
  }

  Matrix best(n, L, kNegInf);
  std::vector<size_t> back(n * L, 0);
  for (size_t j = 0; j < L; ++j) best(0, j) = start[j] + emissions(0, j);
  for (size_t i = 1; i < n; ++i) {
    for (size_t j = 0; j < L; ++j) {
      double top = kNegInf;
      size_t arg = 0;
      for (size_t k = 0; k < L; ++k) {
        double v = best(i - 1, k) + transitions(k, j);
        if (v > top) {
          top = v;
          arg = k;
        }
      }
      best(i, j) = top + emissions(i, j);
      back[i * L + j] = arg;
    }
  }

  Decoded d;
  d.path.assign(n, 0);
  double top = kNegInf;
  for (size_t j = 0; j < L; ++j) {
    if (best(n - 1, j) > top) {
      top = best(n - 1, j);
      d.path[n - 1] = j;
    }
  }
  d.score = top;
  for (size_t i = n - 1; i > 0; --i) d.path[i - 1] = back[i * L + d.path[i]];

  // Forward-backward in log space.
  Matrix alpha(n, L, kNegInf), beta(n, L, 0.0);
  Vec tmp(L);
  for (size_t j = 0; j < L; ++j) alpha(0, j) = start[j] + emissions(0, j);
  for (size_t i = 1; i < n; ++i) {
    for (size_t j = 0; j < L; ++j) {
      for (size_t k = 0; k < L; ++k) tmp[k] = alpha(i - 1, k) + transitions(k, j);
      alpha(i, j) = LogSumExp(tmp) + emissions(i, j);
    }
  }
  for (size_t i = n - 1; i > 0; --i) {
    for (size_t j = 0; j < L; ++j) {
      for (size_t k = 0; k < L; ++k) tmp[k] = transitions(j, k) + emissions(i, k) + beta(i, k);
      beta(i - 1, j) = LogSumExp(tmp);
    }
  }
  Vec last(L);
  for (size_t j = 0; j < L; ++j) last[j] = alpha(n - 1, j);
  double log_z = LogSumExp(last);

  d.marginals = Matrix(n, L);
  d.confidence.assign(n, 0.0);
  d.margin.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double first = 0.0, second = 0.0;
    for (size_t j = 0; j < L; ++j) {
      double lp = alpha(i, j) + beta(i, j) - log_z;
      double p = lp == kNegInf || log_z == kNegInf ? 0.0 : std::exp(lp);
      d.marginals(i, j) = p;
      if (p > first) {
        second = first;
        first = p;
      } else if (p > second) {
        second = p;
      }
    }
    d.confidence[i] = d.marginals(i, d.path[i]);
    d.margin[i] = first - second;
  }
  return d;
}

double PathScore(const Matrix &emissions, const Matrix &transitions, const Vec &start,
                 const std::vector<size_t> &path) {
  double s = start[path[0]] + emissions(0, path[0]);
  for (size_t i = 1; i < path.size(); ++i) {
    s += transitions(path[i - 1], path[i]) + emissions(i, path[i]);
  }
  return s;
}

}  // namespace weaklab
