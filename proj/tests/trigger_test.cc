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
#include <set>

#include "test_util.h"
#include "weaklab/core/error.h"
#include "weaklab/core/tokenizer.h"
#include "weaklab/trigger/trigger_labeling.h"
#include "weaklab/trigger/trigger_model.h"

namespace weaklab {
namespace {

using Tokens = std::vector<std::string>;
using testing::DataPath;

TriggerModel SmallModel(const Tokens &vocab, size_t dim, uint32_t seed) {
  TriggerConfig c;
  c.dim = dim;
  c.seed = seed;
  return TriggerModel({"POS", "NEG"}, vocab, nullptr, c);
}

TEST(TriggerEncodeTest, SingleTokenIsItsRow) {
  TriggerModel m = SmallModel({"a", "b", "c"}, 4, 1);
  m.attention() = {0.3, -0.2, 0.5, 1.0};
  Vec v = m.Encode({"b"});
  auto row = m.table().Row(m.Row("b"));
  for (size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(v[i], row[i]);
}

TEST(TriggerEncodeTest, RepeatedTokenIsItsRow) {
  TriggerModel m = SmallModel({"a", "b"}, 4, 2);
  m.attention() = {1.0, 2.0, -1.0, 0.5};
  Vec v = m.Encode({"a", "a", "a"});
  auto row = m.table().Row(m.Row("a"));
  for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(v[i], row[i], 1e-12);
}

TEST(TriggerEncodeTest, HandComputedSoftmaxPooling) {
  TriggerModel m = SmallModel({"x", "y", "z"}, 2, 3);
  Matrix &t = m.table();
  auto set = [&](const std::string &w, double a, double b) {
    t(m.Row(w), 0) = a;
    t(m.Row(w), 1) = b;
  };
  set("x", 1.0, 0.0);
  set("y", 0.0, 1.0);
  set("z", 1.0, 1.0);
  m.attention() = {1.0, 2.0};
  // Scores 1, 2, 3.
  double e1 = std::exp(1.0), e2 = std::exp(2.0), e3 = std::exp(3.0), z = e1 + e2 + e3;
  Vec alpha = m.Attention({"x", "y", "z"});
  EXPECT_NEAR(alpha[0], e1 / z, 1e-12);
  EXPECT_NEAR(alpha[1], e2 / z, 1e-12);
  EXPECT_NEAR(alpha[2], e3 / z, 1e-12);
  Vec v = m.Encode({"x", "y", "z"});
  EXPECT_NEAR(v[0], (e1 + e3) / z, 1e-12);
  EXPECT_NEAR(v[1], (e2 + e3) / z, 1e-12);
}

TEST(TriggerEncodeTest, UnknownTokensShareRowZero) {
  TriggerModel m = SmallModel({"a"}, 3, 4);
  EXPECT_EQ(m.Row("never-seen"), 0u);
  EXPECT_EQ(m.Encode({"q"}), m.Encode({"r"}));
  EXPECT_THROW(m.Encode({}), Error);
}

// Central differences over every parameter.
TEST(TriggerGradientTest, MatchesFiniteDifferences) {
  const Tokens vocab = {"a", "b", "c", "d", "e"};
  for (uint32_t trial = 0; trial < 20; ++trial) {
    TriggerModel m = SmallModel(vocab, 4, 100 + trial);
    std::mt19937 rng(trial);
    std::normal_distribution<double> n(0.0, 0.5);
    for (double &x : m.attention()) x = n(rng);
    for (double &x : m.projection().data) x = n(rng);
    for (double &x : m.bias()) x = n(rng);

    std::vector<Tokens> seqs;
    for (int i = 0; i < 6; ++i) {
      Tokens s;
      size_t len = 1 + rng() % 4;
      for (size_t k = 0; k < len; ++k) s.push_back(vocab[rng() % vocab.size()]);
      if (rng() % 5 == 0) s.push_back("unknown");
      seqs.push_back(s);
    }
    std::vector<TriggerPair> batch;
    for (int i = 0; i < 4; ++i) {
      batch.push_back({&seqs[rng() % 6], &seqs[rng() % 6], rng() % 2, rng() % 2 == 0});
    }

    TriggerGradients g;
    m.JointLoss(batch, &g);
    const double h = 1e-6;
    auto check = [&](Vec &params, const Vec &grad, const char *what) {
      for (size_t i = 0; i < params.size(); ++i) {
        double keep = params[i];
        params[i] = keep + h;
        double up = m.JointLoss(batch, nullptr);
        params[i] = keep - h;
        double down = m.JointLoss(batch, nullptr);
        params[i] = keep;
        double numeric = (up - down) / (2 * h);
        EXPECT_NEAR(grad[i], numeric, 1e-6 + 1e-4 * std::abs(numeric))
            << what << "[" << i << "] trial " << trial;
      }
    };
    check(m.table().data, g.embeddings.data, "embeddings");
    check(m.attention(), g.attention, "attention");
    check(m.projection().data, g.projection.data, "projection");
    check(m.bias(), g.bias, "bias");
  }
}

TEST(TriggerGradientTest, UnmatchedPairBeyondMarginHasNoContrastiveTerm) {
  TriggerModel m = SmallModel({"a", "b"}, 4, 9);
  Tokens a = {"a"}, b = {"b"};
  Matrix &t = m.table();
  for (size_t c = 0; c < 4; ++c) {
    t(m.Row("a"), c) = 0.0;
    t(m.Row("b"), c) = 5.0;
  }
  TriggerGradients g;
  double loss = m.JointLoss({{&a, &b, 0, false}}, &g);
  // Only the classification half remains: 0.5 * ln 2 with zero weights.
  EXPECT_NEAR(loss, 0.5 * std::log(2.0), 1e-12);
  for (double x : g.embeddings.Row(m.Row("b"))) EXPECT_EQ(x, 0.0);
}

std::vector<TriggerExample> PolarityExamples() {
  const std::vector<std::pair<Tokens, size_t>> triggers = {
      {{"loved", "it"}, 0}, {{"really", "great"}, 0}, {{"so", "tasty"}, 0},
      {{"hated", "it"}, 1}, {{"really", "awful"}, 1}, {{"so", "bland"}, 1}};
  const std::vector<Tokens> fillers = {{"the", "soup"}, {"our", "waiter"}, {"this", "place"}};
  std::vector<TriggerExample> out;
  for (const auto &[trig, label] : triggers) {
    for (const Tokens &f : fillers) {
      Tokens s = f;
      s.insert(s.end(), trig.begin(), trig.end());
      s.push_back("today");
      out.push_back({trig, s, label});
    }
  }
  return out;
}

Tokens VocabOf(const std::vector<TriggerExample> &ex) {
  std::set<std::string> v;
  for (const auto &e : ex) {
    v.insert(e.trigger.begin(), e.trigger.end());
    v.insert(e.sentence.begin(), e.sentence.end());
  }
  return {v.begin(), v.end()};
}

TEST(TriggerTrainTest, ZeroEpochsLeavesParametersUntouched) {
  auto ex = PolarityExamples();
  TriggerConfig c;
  c.epochs = 0;
  TriggerModel m({"POS", "NEG"}, VocabOf(ex), nullptr, c);
  TriggerModel before = m;
  auto history = m.Train(ex);
  EXPECT_EQ(history.size(), 1u);
  EXPECT_EQ(m.table(), before.table());
  EXPECT_EQ(m.attention(), before.attention());
  EXPECT_EQ(m.projection(), before.projection());
}

TEST(TriggerTrainTest, SeparatesMatchedFromUnmatched) {
  auto ex = PolarityExamples();
  TriggerModel m({"POS", "NEG"}, VocabOf(ex), nullptr, TriggerConfig{});
  auto history = m.Train(ex);
  ASSERT_EQ(history.size(), 61u);
  // Smoothed: the mean of the last five epochs is well under the start.
  double tail = 0.0;
  for (size_t i = history.size() - 5; i < history.size(); ++i) tail += history[i] / 5.0;
  EXPECT_LT(tail, 0.5 * history.front());

  double matched = 0.0, unmatched = 0.0;
  int nm = 0, nu = 0;
  for (const auto &t : ex) {
    for (const auto &s : ex) {
      double d = std::sqrt(SquaredDistance(m.Encode(t.trigger), m.Encode(s.sentence)));
      if (t.label == s.label) {
        matched += d;
        ++nm;
      } else {
        unmatched += d;
        ++nu;
      }
    }
  }
  EXPECT_LT(matched / nm, unmatched / nu);
  for (const auto &e : ex) {
    Vec p = m.LabelProbabilities(m.Encode(e.trigger));
    EXPECT_GT(p[e.label], 0.5);
  }
  EXPECT_GT(m.threshold(), 0.0);
}

TEST(TriggerTrainTest, SingleLabelIsDegenerate) {
  std::vector<TriggerExample> ex = {{{"a"}, {"a", "b"}, 0}, {{"b"}, {"b"}, 0}};
  TriggerModel m({"POS", "NEG"}, {"a", "b"}, nullptr, TriggerConfig{});
  try {
    m.Train(ex);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateData);
  }
}

TEST(TriggerTrainTest, DeterministicForSeed) {
  auto ex = PolarityExamples();
  TriggerModel a({"POS", "NEG"}, VocabOf(ex), nullptr, TriggerConfig{});
  TriggerModel b({"POS", "NEG"}, VocabOf(ex), nullptr, TriggerConfig{});
  EXPECT_EQ(a.Train(ex), b.Train(ex));
  EXPECT_EQ(a.ToJson(), b.ToJson());
}

TEST(TriggerMatchTest, ThresholdBounds) {
  auto ex = PolarityExamples();
  TriggerModel m({"POS", "NEG"}, VocabOf(ex), nullptr, TriggerConfig{});
  m.Train(ex);
  auto table = m.BuildTable(ex);
  ASSERT_EQ(table.size(), 6u);
  Tokens sentence = {"the", "soup", "really", "great", "today"};

  m.set_threshold(-1.0);
  EXPECT_TRUE(m.SoftMatch(sentence, table).empty());
  m.set_threshold(0.0);
  EXPECT_TRUE(m.SoftMatch(sentence, table).empty());
  // A sentence identical to a trigger sits at distance zero.
  auto exact = m.SoftMatch({"so", "tasty"}, table);
  ASSERT_EQ(exact.size(), 1u);
  EXPECT_EQ(exact[0].distance, 0.0);

  m.set_threshold(std::numeric_limits<double>::infinity());
  auto all = m.SoftMatch(sentence, table);
  ASSERT_EQ(all.size(), table.size());
  for (size_t i = 1; i < all.size(); ++i) EXPECT_LE(all[i - 1].distance, all[i].distance);
  EXPECT_EQ(all[0].entry->label, 0u);
}

TEST(TriggerMatchTest, RaisingThresholdOnlyAddsMatches) {
  auto ex = PolarityExamples();
  TriggerModel m({"POS", "NEG"}, VocabOf(ex), nullptr, TriggerConfig{});
  m.Train(ex);
  auto table = m.BuildTable(ex);
  for (const auto &e : ex) {
    std::set<std::string> prev;
    for (double th = 0.0; th < 3.0; th += 0.1) {
      m.set_threshold(th);
      std::set<std::string> now;
      for (const auto &mt : m.SoftMatch(e.sentence, table)) now.insert(mt.entry->id);
      EXPECT_TRUE(std::includes(now.begin(), now.end(), prev.begin(), prev.end()));
      prev = now;
    }
  }
}

TEST(TriggerMatchTest, CalibratedThresholdIsMatchedDistancePercentile) {
  auto ex = PolarityExamples();
  TriggerModel m({"POS", "NEG"}, VocabOf(ex), nullptr, TriggerConfig{});
  m.Train(ex);
  std::vector<double> d;
  for (const auto &e : ex) d.push_back(std::sqrt(SquaredDistance(m.Encode(e.trigger), m.Encode(e.sentence))));
  std::sort(d.begin(), d.end());
  // 18 values: rank 0.2 * 17 = 3.4.
  EXPECT_NEAR(m.threshold(), d[3] + 0.4 * (d[4] - d[3]), 1e-12);
}

TEST(TriggerMatchTest, FixedThresholdOverridesPercentile) {
  auto ex = PolarityExamples();
  TriggerConfig c;
  c.threshold = 0.75;
  TriggerModel m({"POS", "NEG"}, VocabOf(ex), nullptr, c);
  m.Train(ex);
  EXPECT_DOUBLE_EQ(m.threshold(), 0.75);
  EXPECT_EQ(TriggerConfig::FromJson(c.ToJson()).threshold, 0.75);
  EXPECT_FALSE(TriggerConfig::FromJson(TriggerConfig{}.ToJson()).threshold.has_value());
}

TEST(TriggerModelTest, JsonRoundTrip) {
  auto ex = PolarityExamples();
  TriggerModel m({"POS", "NEG"}, VocabOf(ex), nullptr, TriggerConfig{});
  m.Train(ex);
  TriggerModel back = TriggerModel::FromJson(nlohmann::json::parse(m.ToJson().dump()));
  EXPECT_EQ(back.ToJson(), m.ToJson());
  EXPECT_EQ(back.Encode({"so", "bland"}), m.Encode({"so", "bland"}));
  nlohmann::json bad = m.ToJson();
  bad["format_version"] = 2;
  EXPECT_THROW(TriggerModel::FromJson(bad), Error);
}

TEST(TriggerModelTest, PretrainedRowsAreCopied) {
  Embeddings emb = Embeddings::LoadFile(DataPath("toy_embeddings.txt"));
  TriggerModel m({"POS", "NEG"}, {"happy", "zzz"}, &emb, TriggerConfig{});
  EXPECT_EQ(m.dim(), emb.dim());
  auto row = m.table().Row(m.Row("happy"));
  const Vec *want = emb.Find("happy");
  ASSERT_NE(want, nullptr);
  for (size_t i = 0; i < emb.dim(); ++i) EXPECT_EQ(row[i], (*want)[i]);
}

TEST(MajorityVoteTest, Examples) {
  using V = std::vector<std::string>;
  EXPECT_EQ(MajorityVote({{"B-X", "I-X", "O"}, {"B-X", "I-X", "O"}, {"O", "O", "B-Y"}}),
            (V{"B-X", "I-X", "O"}));
  // Tie at position 0 goes to O; the orphaned I-X is repaired.
  EXPECT_EQ(MajorityVote({{"B-X", "I-X"}, {"O", "I-X"}}), (V{"O", "B-X"}));
  // Plurality without majority still wins.
  EXPECT_EQ(MajorityVote({{"B-X"}, {"B-X"}, {"B-Y"}, {"O"}}), (V{"B-X"}));
  EXPECT_EQ(MajorityVote({{"B-X"}, {"B-Y"}}), (V{"O"}));
  EXPECT_TRUE(MajorityVote({}).empty());
  EXPECT_THROW(MajorityVote({{"O"}, {"O", "O"}}), Error);
}

TEST(MajorityVoteTest, RepairBio) {
  using V = std::vector<std::string>;
  EXPECT_EQ(RepairBio({"I-X", "I-X", "O", "I-Y", "B-X", "I-Y"}),
            (V{"B-X", "I-X", "O", "B-Y", "B-X", "B-Y"}));
}

TEST(MajorityVoteTest, PermutationInvariantAndValid) {
  const std::vector<std::string> tags = {"O", "B-X", "I-X", "B-Y", "I-Y"};
  BioTags bio({"X", "Y"});
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    size_t runs = 1 + rng() % 5, n = 1 + rng() % 6;
    std::vector<std::vector<std::string>> preds(runs, std::vector<std::string>(n));
    for (auto &p : preds) {
      for (auto &t : p) t = tags[rng() % tags.size()];
    }
    auto voted = MajorityVote(preds);
    EXPECT_TRUE(bio.Valid(voted));
    std::shuffle(preds.begin(), preds.end(), rng);
    EXPECT_EQ(MajorityVote(preds), voted);
  }
}

TEST(TriggerAttentionTest, MaxNormalized) {
  auto ex = PolarityExamples();
  TriggerModel m({"POS", "NEG"}, VocabOf(ex), nullptr, TriggerConfig{});
  Vec v = m.Encode({"loved", "it"});
  Vec beta = TriggerAttention(m, v, {"the", "soup", "loved", "it"});
  EXPECT_NEAR(*std::max_element(beta.begin(), beta.end()), 1.0, 1e-12);
  for (double b : beta) EXPECT_GT(b, 0.0);
}

// Restaurant and location mentions marked with their cue phrases.
std::vector<TriggeredSentence> DiningCorpus() {
  const Tokens restaurants = {"Subway", "Chipotle", "Wendys", "Nandos", "Arbys", "Dennys"};
  const Tokens cities = {"Paris", "Boston", "Denver", "Austin", "Dallas", "Oslo"};
  struct Pattern {
    std::string before, after, label;
    Tokens trigger;
  };
  const std::vector<Pattern> patterns = {
      {"I had lunch at", "yesterday", "RESTAURANT", {"had", "lunch", "at"}},
      {"We ate at", ", where the food is great", "RESTAURANT", {"where", "the", "food"}},
      {"They had dinner at", "last night", "RESTAURANT", {"had", "dinner", "at"}},
      {"She lives in", "now", "LOC", {"lives", "in"}},
      {"He moved to", "last year", "LOC", {"moved", "to"}},
      {"We flew to", ", where the weather is cold", "LOC", {"where", "the", "weather"}}};
  std::vector<TriggeredSentence> out;
  for (const Pattern &p : patterns) {
    const Tokens &names = p.label == "LOC" ? cities : restaurants;
    for (const std::string &name : names) {
      TriggeredSentence s;
      s.text = Tokenize(p.before + " " + name + " " + p.after);
      size_t at = Tokenize(p.before).size();
      s.tags.assign(s.text.size(), "O");
      s.tags[at] = "B-" + p.label;
      s.triggers.push_back({p.trigger, p.label});
      out.push_back(std::move(s));
    }
  }
  return out;
}

TEST(TriggerLabelingTest, DinnerAtUnseenRestaurant) {
  auto corpus = DiningCorpus();
  std::vector<TriggerExample> ex;
  std::set<std::string> vocab;
  const std::vector<std::string> labels = {"RESTAURANT", "LOC"};
  for (const auto &s : corpus) {
    for (const auto &g : s.triggers) {
      size_t label = g.label == "LOC" ? 1 : 0;
      ex.push_back({g.tokens, s.text.Lowered(), label});
    }
    for (const auto &w : s.text.Lowered()) vocab.insert(w);
  }
  TriggerModel model(labels, {vocab.begin(), vocab.end()}, nullptr, TriggerConfig{});
  model.Train(ex);
  auto table = model.BuildTable(ex);
  ASSERT_EQ(table.size(), 6u);

  SequenceLabeler labeler(labels);
  labeler.Train(TriggerAwareExamples(corpus, model, nullptr), 10, 3);

  TokenizedText text = Tokenize("I had a dinner at McDonalds, where the food is cheap");
  model.set_threshold(std::numeric_limits<double>::infinity());
  auto nearest = model.SoftMatch(text.Lowered(), table);
  ASSERT_FALSE(nearest.empty());
  EXPECT_EQ(labels[nearest[0].entry->label], "RESTAURANT");

  // Keep the two nearest triggers.
  model.set_threshold(nearest[1].distance);
  auto vote = TriggerAwareLabels(labeler, model, table, text, nullptr);
  ASSERT_TRUE(vote.has_value());
  ASSERT_GE(vote->provenance.size(), 2u);
  std::vector<std::string> want(text.size(), "O");
  want[5] = "B-RESTAURANT";
  EXPECT_EQ(vote->tags, want);

  auto anns = VoteAnnotations(7, *vote);
  ASSERT_EQ(anns.size(), 1u);
  EXPECT_EQ(anns[0].span, (Span{7, 5, 6}));
  EXPECT_EQ(anns[0].source, Source::kWeak);
  EXPECT_EQ(anns[0].provenance->kind, "trigger");
  EXPECT_NEAR(anns[0].provenance->score, 1.0 / (1.0 + nearest[0].distance), 1e-12);
}

TEST(TriggerLabelingTest, NoMatchGivesNothing) {
  auto corpus = DiningCorpus();
  std::vector<TriggerExample> ex;
  std::set<std::string> vocab;
  for (const auto &s : corpus) {
    ex.push_back({s.triggers[0].tokens, s.text.Lowered(), s.triggers[0].label == "LOC" ? 1u : 0u});
    for (const auto &w : s.text.Lowered()) vocab.insert(w);
  }
  TriggerModel model({"RESTAURANT", "LOC"}, {vocab.begin(), vocab.end()}, nullptr, TriggerConfig{});
  model.Train(ex);
  model.set_threshold(-1.0);
  SequenceLabeler labeler({"RESTAURANT", "LOC"});
  EXPECT_FALSE(TriggerAwareLabels(labeler, model, model.BuildTable(ex), Tokenize("hello there"),
                                  nullptr)
                   .has_value());
}

TEST(TriggerLabelingTest, UnknownTriggerLabelRejected) {
  TriggeredSentence s;
  s.text = Tokenize("at Subway");
  s.tags = {"O", "B-X"};
  s.triggers = {{{"at"}, "X"}};
  TriggerModel model({"RESTAURANT", "LOC"}, {"at"}, nullptr, TriggerConfig{});
  EXPECT_THROW(TriggerAwareExamples({s}, model, nullptr), Error);
}

}  // namespace
}  // namespace weaklab
