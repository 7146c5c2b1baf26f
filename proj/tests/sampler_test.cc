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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "weaklab/core/error.h"
#include "weaklab/sampler/active_sampler.h"

namespace weaklab {
namespace {

TEST(UncertaintyTest, ClassBounds) {
  EXPECT_DOUBLE_EQ(ClassUncertainty({0.25, 0.25, 0.25, 0.25}), 0.75);
  EXPECT_DOUBLE_EQ(ClassUncertainty({0.0, 1.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(ClassUncertainty({}), 0.0);
}

TEST(UncertaintyTest, TwoTokenSequenceByHand) {
  // Two tags, two tokens, no constraints.
  Matrix e(2, 2);
  e(0, 0) = 1.0;
  e(0, 1) = 0.0;
  e(1, 0) = 0.0;
  e(1, 1) = 0.5;
  Matrix t(2, 2);
  t(0, 0) = 0.2;
  t(0, 1) = -0.3;
  t(1, 0) = 0.0;
  t(1, 1) = 0.4;
  Vec s = {0.0, 0.1};

  // Path scores: s[a] + e(0,a) + t(a,b) + e(1,b).
  double w[2][2];
  double z = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      w[a][b] = std::exp(s[a] + e(0, a) + t(a, b) + e(1, b));
      z += w[a][b];
    }
  }
  int ba = 0, bb = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (w[a][b] > w[ba][bb]) ba = a, bb = b;
    }
  }
  double m0 = (w[ba][0] + w[ba][1]) / z;
  double m1 = (w[0][bb] + w[1][bb]) / z;
  double want = ((1.0 - m0) + (1.0 - m1)) / 2.0;

  Decoded d = ViterbiDecode(e, t, s);
  EXPECT_EQ(d.path, (std::vector<size_t>{static_cast<size_t>(ba), static_cast<size_t>(bb)}));
  EXPECT_NEAR(SequenceUncertainty(d), want, 1e-12);
}

TEST(SelectBatchTest, WholePoolWhenKLarge) {
  auto u = [](DocId id) { return static_cast<double>(id % 3); };
  auto out = SelectBatch({5, 3, 9, 1}, {}, 10, u);
  EXPECT_EQ(out.size(), 4u);
  std::vector<DocId> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<DocId>{1, 3, 5, 9}));
}

TEST(SelectBatchTest, HighUncertaintyFirst) {
  auto u = [](DocId id) { return id == 42 ? 0.9 : 0.1; };
  auto out = SelectBatch({1, 2, 42, 3}, {}, 2, u);
  EXPECT_EQ(out, (std::vector<DocId>{42, 1}));
}

TEST(SelectBatchTest, ColdStartIsIdOrder) {
  EXPECT_EQ(SelectBatch({7, 2, 9, 4, 1}, {}, 3, nullptr), (std::vector<DocId>{1, 2, 4}));
}

TEST(SelectBatchTest, Errors) {
  try {
    SelectBatch({}, {}, 1, nullptr);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyPool);
  }
  try {
    SelectBatch({1, 2}, {1, 2}, 1, nullptr);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyPool);
  }
  EXPECT_THROW(SelectBatch({1}, {}, 0, nullptr), Error);
}

TEST(SelectBatchTest, DisjointDuplicateFreeAndPermutationStable) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DocId> pool;
    size_t n = 1 + rng() % 30;
    for (size_t i = 0; i < n; ++i) pool.push_back(rng() % 40);
    std::set<DocId> annotated;
    for (int i = 0; i < 5; ++i) annotated.insert(rng() % 40);
    // Coarse scores so ties are common.
    std::vector<double> score(40);
    for (double &s : score) s = static_cast<double>(rng() % 4) / 4.0;
    UncertaintyFn u = [&](DocId id) { return score[id]; };
    size_t k = 1 + rng() % 10;

    std::vector<DocId> out;
    try {
      out = SelectBatch(pool, annotated, k, u);
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kEmptyPool);
      continue;
    }
    std::set<DocId> uniq(out.begin(), out.end());
    EXPECT_EQ(uniq.size(), out.size());
    for (DocId id : out) EXPECT_FALSE(annotated.count(id));
    for (size_t i = 1; i < out.size(); ++i) {
      EXPECT_TRUE(score[out[i - 1]] > score[out[i]] ||
                  (score[out[i - 1]] == score[out[i]] && out[i - 1] < out[i]));
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    EXPECT_EQ(SelectBatch(pool, annotated, k, u), out);
  }
}

}  // namespace
}  // namespace weaklab
