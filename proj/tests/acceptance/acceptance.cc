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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check carries its own oracle.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "httplib.h"
#include "relation_corpus.h"
#include "session_fixture.h"
#include "test_util.h"
#include "weaklab/core/tokenizer.h"
#include "weaklab/matcher/weak_labeler.h"
#include "weaklab/models/classifier.h"
#include "weaklab/models/viterbi.h"
#include "weaklab/parser/grammar.h"
#include "weaklab/parser/parser.h"
#include "weaklab/service/engine.h"
#include "weaklab/service/http_server.h"
#include "weaklab/store/codec.h"
#include "weaklab/store/export.h"
#include "weaklab/store/project_store.h"
#include "weaklab/trigger/trigger_labeling.h"
#include "weaklab/trigger/trigger_model.h"

namespace weaklab::acceptance {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fixed(double x, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

LabelSchema RelationSchema() {
  LabelSchema s;
  s.task = TaskKind::kRelationExtraction;
  int key = 1;
  for (const std::string &l : RelationLabels()) s.labels.push_back({l, std::to_string(key++), ""});
  return s;
}

std::string BetweenExplanation(const std::string &cue) {
  return "the word '" + cue + "' occurs between SUBJ and OBJ";
}

// ---------------------------------------------------------------------------
// Label efficiency: 50 explained gold annotations against 100 plain ones.

struct Corpus {
  std::vector<RelationSentence> train, test;
  Embeddings embeddings;
};

Corpus MakeCorpus() {
  const uint32_t seed = 20260501;
  Corpus c;
  c.train = GenerateRelations(600, seed);
  std::set<std::string> seen;
  for (const auto &s : c.train) seen.insert(s.text);
  for (const auto &s : GenerateRelations(450, seed + 1)) {
    if (!seen.count(s.text)) c.test.push_back(s);
  }
  std::vector<RelationSentence> all = c.train;
  all.insert(all.end(), c.test.begin(), c.test.end());
  // Paraphrase cosine about 0.6, typical of close synonyms in trained vectors.
  c.embeddings = RelationEmbeddings(all, 24, 0.8, seed + 2);
  return c;
}

Annotation RelationGold(DocId doc, const RelationSentence &s, bool explain) {
  Annotation a;
  a.doc_id = doc;
  a.kind = AnnotationKind::kRelation;
  a.span = Span{doc, s.subj, s.subj + 1};
  a.span2 = Span{doc, s.obj, s.obj + 1};
  a.label = s.label;
  a.created_at = 1;
  if (explain) {
    Explanation e;
    e.variant = ExplanationVariant::kNaturalLanguage;
    e.nl_text = BetweenExplanation(s.cue);
    e.parsed_form = Parse(e.nl_text, TaskKind::kRelationExtraction, s.label);
    a.explanation = e;
  }
  return a;
}

std::string Entities(const RelationSentence &s) {
  return std::to_string(s.subj) + "-" + std::to_string(s.subj + 1) + "," + std::to_string(s.obj) +
         "-" + std::to_string(s.obj + 1);
}

std::vector<ImportRecord> GoldRecords(const std::vector<RelationSentence> &sentences) {
  std::vector<ImportRecord> out;
  for (const RelationSentence &s : sentences) {
    Document doc;
    doc.id = 1;
    doc.content = Tokenize(s.text);
    ImportRecord r;
    r.text = s.text;
    r.annotations.push_back(AnnotationToExportJson(RelationGold(1, s, false), doc));
    out.push_back(std::move(r));
  }
  return out;
}

struct ArmResult {
  EvalReport eval;
  PipelineReport report;
};

ArmResult RunArm(const Corpus &c, size_t gold, bool explain) {
  ProjectStore store = ProjectStore::InMemory("arm", RelationSchema());
  size_t annotated = 0;
  for (const RelationSentence &s : c.train) {
    std::optional<DocId> id = store.AddDocument(s.text, {{"entities", Entities(s)}});
    if (!id || annotated >= gold) continue;
    store.AddAnnotation(RelationGold(*id, s, explain));
    ++annotated;
  }
  ServiceConfig config;
  config.data_dir.clear();
  ArmResult r;
  ModelSnapshot snap = TrainSnapshot(store.state(), config, c.embeddings, 1, &r.report);
  r.eval = EvaluateSnapshot(snap, store.state().schema, GoldRecords(c.test), config, c.embeddings);
  return r;
}

Outcome LabelEfficiency() {
  const auto start = Clock::now();
  Corpus c = MakeCorpus();
  ArmResult explained = RunArm(c, 50, true);
  ArmResult plain = RunArm(c, 100, false);
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const double gain = 100.0 * (explained.eval.macro_f1 - plain.eval.macro_f1);
  Outcome o;
  o.pass = gain >= 5.0 && seconds <= 60.0 && c.train.size() + c.test.size() >= 500;
  o.detail = "macro-F1 50 gold+explanations " + Fixed(explained.eval.macro_f1) +
             " (weak labels " + std::to_string(explained.report.weak_labels()) + ") vs 100 gold " +
             Fixed(plain.eval.macro_f1) + ", gain " + Fixed(gain, 1) + " points, " +
             std::to_string(c.train.size()) + "+" + std::to_string(c.test.size()) +
             " sentences, " + Fixed(seconds, 1) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// Strict matching against an exact string oracle.

struct Rule {
  std::string id;
  std::string label;
  std::vector<std::string> phrase;  // lowercased tokens
  bool between = false;             // otherwise anywhere in the sentence
};

// First exact occurrence of `phrase`, the position the matcher scores.
std::optional<size_t> FirstOccurrence(const std::vector<std::string> &words,
                                      const std::vector<std::string> &phrase) {
  if (phrase.empty() || phrase.size() > words.size()) return std::nullopt;
  for (size_t i = 0; i + phrase.size() <= words.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<long>(i))) return i;
  }
  return std::nullopt;
}

Outcome StrictDegeneracy() {
  Corpus c = MakeCorpus();
  std::vector<Rule> rules;
  std::vector<RuleForm> forms;
  int next = 0;
  for (const CueFamily &f : CueFamilies()) {
    // The two most common paraphrases as between-rules, a rarer one as a
    // sentence-level keyword rule.
    for (size_t v = 0; v < 2; ++v) {
      const std::string &cue = f.words[v];
      rules.push_back({"r" + std::to_string(next++), f.label, TokenizeLower(cue), true});
      forms.push_back({rules.back().id, Parse(BetweenExplanation(cue), TaskKind::kRelationExtraction, f.label)});
    }
    rules.push_back({"r" + std::to_string(next++), f.label, {f.words[3]}, false});
    forms.push_back({rules.back().id, Parse("the word '" + f.words[3] + "' appears in the sentence",
                                            TaskKind::kRelationExtraction, f.label)});
  }
  // A rule on a function word makes cross-label ties common.
  rules.push_back({"r" + std::to_string(next++), "cause-effect", {"by"}, true});
  forms.push_back({rules.back().id, Parse(BetweenExplanation("by"), TaskKind::kRelationExtraction, "cause-effect")});

  std::vector<TokenizedText> sentences;
  for (const auto &s : c.train) sentences.push_back(Tokenize(s.text));
  std::vector<MatchInstance> pool;
  for (size_t i = 0; i < c.train.size(); ++i) {
    MatchInstance m;
    m.doc_id = i + 1;
    m.ctx.sentence = &sentences[i];
    m.ctx.subj = Span{m.doc_id, c.train[i].subj, c.train[i].subj + 1};
    m.ctx.obj = Span{m.doc_id, c.train[i].obj, c.train[i].obj + 1};
    pool.push_back(m);
  }

  using Key = std::tuple<DocId, std::string, size_t, size_t>;
  std::set<Key> want;
  for (size_t i = 0; i < c.train.size(); ++i) {
    std::vector<std::string> words;
    for (const Token &t : sentences[i].tokens) {
      std::string w = t.surface;
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char ch) { return std::tolower(ch); });
      words.push_back(w);
    }
    const size_t lo = c.train[i].subj + 1, hi = c.train[i].obj;
    std::set<std::string> labels;
    for (const Rule &r : rules) {
      auto p = FirstOccurrence(words, r.phrase);
      if (!p) continue;
      if (r.between && !(*p >= lo && *p + r.phrase.size() <= hi)) continue;
      labels.insert(r.label);
    }
    if (labels.size() == 1) want.insert({i + 1, *labels.begin(), c.train[i].subj, c.train[i].obj});
  }

  std::vector<Annotation> got = WeakLabelCorpus(forms, pool, TaskKind::kRelationExtraction,
                                                Thresholds{1.0, 1.0}, c.embeddings);
  std::set<Key> have;
  for (const Annotation &a : got) have.insert({a.doc_id, a.label, a.span->start, a.span2->start});
  std::vector<Key> missing, extra;
  std::set_difference(want.begin(), want.end(), have.begin(), have.end(), std::back_inserter(missing));
  std::set_difference(have.begin(), have.end(), want.begin(), want.end(), std::back_inserter(extra));
  Outcome o;
  o.pass = missing.empty() && extra.empty() && have.size() == got.size() && !want.empty();
  o.detail = std::to_string(got.size()) + " weak labels, oracle " + std::to_string(want.size()) +
             ", missing " + std::to_string(missing.size()) + ", extra " + std::to_string(extra.size()) +
             " over " + std::to_string(pool.size()) + " instances";
  return o;
}

// ---------------------------------------------------------------------------
// Parser golden corpus.

Outcome ParserGolden() {
  std::vector<testing::GoldenExplanation> golden = testing::LoadGolden();
  size_t parsed = 0, round_trips = 0;
  bool figure = false;
  std::set<PredicateCategory> categories;
  std::set<TaskKind> tasks;
  std::string first_failure;
  for (const auto &g : golden) {
    figure = figure || g.text.find("occurs between SUBJ and OBJ") != std::string::npos;
    try {
      LogicalForm f = Parse(g.text, g.task, g.label);
      if (ToString(f.root) == g.form) {
        ++parsed;
      } else if (first_failure.empty()) {
        first_failure = g.text;
      }
      if (Parse(Render(f), g.task, g.label) == f) ++round_trips;
      std::vector<const Clause *> stack = {&f.root};
      while (!stack.empty()) {
        const Clause *cl = stack.back();
        stack.pop_back();
        categories.insert(Signature(cl->predicate).category);
        for (const Clause &ch : cl->children) stack.push_back(&ch);
      }
      tasks.insert(g.task);
    } catch (const std::exception &e) {
      if (first_failure.empty()) first_failure = g.text + " (" + e.what() + ")";
    }
  }
  Outcome o;
  o.pass = golden.size() >= 20 && parsed == golden.size() && round_trips == golden.size() &&
           categories.size() == 4 && tasks.size() == 3 && figure;
  o.detail = std::to_string(parsed) + "/" + std::to_string(golden.size()) + " golden, " +
             std::to_string(round_trips) + " round trips, " + std::to_string(categories.size()) +
             " predicate categories, " + std::to_string(tasks.size()) + " tasks";
  if (!first_failure.empty()) o.detail += "; first failure: " + first_failure;
  return o;
}

// ---------------------------------------------------------------------------
// Viterbi against path enumeration.

Outcome DecoderExactness() {
  std::mt19937 rng(4242);
  std::normal_distribution<double> g(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng() % 5, labels = 1 + rng() % 4;
    Matrix e(n, labels), t(labels, labels);
    Vec s(labels);
    for (double &x : e.data) x = g(rng);
    for (double &x : t.data) x = g(rng);
    for (double &x : s) x = g(rng);
    std::vector<size_t> path(n, 0), best;
    double best_score = kNegInf;
    while (true) {
      double score = s[path[0]] + e(0, path[0]);
      for (size_t i = 1; i < n; ++i) score += t(path[i - 1], path[i]) + e(i, path[i]);
      if (score > best_score) {
        best_score = score;
        best = path;
      }
      size_t i = n;
      while (i > 0 && ++path[i - 1] == labels) path[--i] = 0;
      if (i == 0) break;
    }
    Decoded d = ViterbiDecode(e, t, s);
    if (d.path != best || std::abs(d.score - best_score) > 1e-9) ++mismatches;
  }
  return {mismatches == 0, "200 random instances, " + std::to_string(mismatches) + " mismatches"};
}

// ---------------------------------------------------------------------------
// Gradients against central differences.

double RelativeError(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-3});
}

Outcome GradientChecks() {
  const double h = 1e-5;
  double worst_joint = 0.0, worst_class = 0.0;
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  for (uint32_t trial = 0; trial < 20; ++trial) {
    std::mt19937 rng(700 + trial);
    std::normal_distribution<double> n(0.0, 0.5);
    TriggerConfig config;
    config.dim = 2 + trial % 4;
    config.seed = trial;
    config.margin = 0.5 + 0.1 * (trial % 5);
    TriggerModel m({"X", "Y", "Z"}, vocab, nullptr, config);
    for (double &x : m.attention()) x = n(rng);
    for (double &x : m.projection().data) x = n(rng);
    for (double &x : m.bias()) x = n(rng);
    std::vector<std::vector<std::string>> seqs;
    for (int i = 0; i < 5; ++i) {
      std::vector<std::string> s;
      for (size_t k = 0, len = 1 + rng() % 4; k < len; ++k) s.push_back(vocab[rng() % vocab.size()]);
      seqs.push_back(s);
    }
    std::vector<TriggerPair> batch;
    for (int i = 0; i < 4; ++i) batch.push_back({&seqs[rng() % 5], &seqs[rng() % 5], rng() % 3, rng() % 2 == 0});
    TriggerGradients grads;
    m.JointLoss(batch, &grads);
    auto probe = [&](Vec &params, const Vec &grad) {
      for (size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + h;
        const double up = m.JointLoss(batch, nullptr);
        params[i] = keep - h;
        const double down = m.JointLoss(batch, nullptr);
        params[i] = keep;
        worst_joint = std::max(worst_joint, RelativeError(grad[i], (up - down) / (2 * h)));
      }
    };
    probe(m.table().data, grads.embeddings.data);
    probe(m.attention(), grads.attention);
    probe(m.projection().data, grads.projection.data);
    probe(m.bias(), grads.bias);

    const size_t labels = 2 + trial % 3, dim = 3 + trial % 5;
    Classifier cls(std::vector<std::string>(labels, "l"), dim, 0.01);
    for (double &w : cls.weights().data) w = n(rng);
    for (double &b : cls.bias()) b = n(rng);
    std::vector<ClassExample> data;
    for (int i = 0; i < 6; ++i) {
      FeatureVec f;
      for (size_t d = 0; d < dim; ++d) {
        if (rng() % 2) f.push_back({d, n(rng)});
      }
      data.push_back({f, rng() % labels, 0.3 + 0.7 * (rng() % 2)});
    }
    Matrix gw;
    Vec gb;
    cls.Gradient(data, &gw, &gb);
    auto probe_cls = [&](Vec &params, const Vec &grad) {
      for (size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + h;
        const double up = cls.Objective(data);
        params[i] = keep - h;
        const double down = cls.Objective(data);
        params[i] = keep;
        worst_class = std::max(worst_class, RelativeError(grad[i], (up - down) / (2 * h)));
      }
    };
    probe_cls(cls.weights().data, gw.data);
    probe_cls(cls.bias(), gb);
  }
  return {worst_joint <= 1e-4 && worst_class <= 1e-4,
          "20 configurations each, worst relative error joint loss " + Fixed(worst_joint * 1e6, 2) +
              "e-6, classifier " + Fixed(worst_class * 1e6, 2) + "e-6"};
}

// ---------------------------------------------------------------------------
// Trigger separation and the vote tie rule.

std::vector<TriggerExample> ToyTriggers() {
  const std::vector<std::pair<std::vector<std::string>, size_t>> triggers = {
      {{"loved", "it"}, 0}, {{"really", "great"}, 0}, {{"so", "tasty"}, 0},
      {{"hated", "it"}, 1}, {{"really", "awful"}, 1}, {{"so", "bland"}, 1}};
  const std::vector<std::vector<std::string>> contexts = {{"the", "soup"}, {"our", "waiter"}, {"this", "place"}};
  std::vector<TriggerExample> out;
  for (const auto &[trigger, label] : triggers) {
    for (const auto &ctx : contexts) {
      std::vector<std::string> s = ctx;
      s.insert(s.end(), trigger.begin(), trigger.end());
      s.push_back("today");
      out.push_back({trigger, s, label});
    }
  }
  return out;
}

Outcome TriggerSeparation() {
  auto ex = ToyTriggers();
  std::set<std::string> vocab;
  for (const auto &e : ex) vocab.insert(e.sentence.begin(), e.sentence.end());
  TriggerModel m({"POS", "NEG"}, {vocab.begin(), vocab.end()}, nullptr, TriggerConfig{});
  m.Train(ex);
  double matched = 0.0, unmatched = 0.0;
  int nm = 0, nu = 0;
  for (const auto &t : ex) {
    for (const auto &s : ex) {
      const double d = std::sqrt(SquaredDistance(m.Encode(t.trigger), m.Encode(s.sentence)));
      (t.label == s.label ? matched : unmatched) += d;
      ++(t.label == s.label ? nm : nu);
    }
  }
  matched /= nm;
  unmatched /= nu;
  using V = std::vector<std::string>;
  const bool ties = MajorityVote({{"B-X"}, {"B-Y"}}) == V{"O"} &&
                    MajorityVote({{"B-X", "O"}, {"O", "O"}}) == V{"O", "O"} &&
                    MajorityVote({{"B-X"}, {"B-Y"}, {"O"}}) == V{"O"} &&
                    MajorityVote({{"B-X"}, {"B-X"}, {"B-Y"}, {"B-Y"}, {"O"}}) == V{"O"} &&
                    MajorityVote({{"B-X"}, {"B-X"}, {"O"}}) == V{"B-X"};
  return {matched < unmatched && ties,
          "mean matched distance " + Fixed(matched) + " < unmatched " + Fixed(unmatched) +
              (ties ? ", tie cases vote O" : ", tie rule violated")};
}

// ---------------------------------------------------------------------------
// Monotonicity of both thresholds.

Outcome Monotonicity() {
  Corpus c = MakeCorpus();
  std::vector<TokenizedText> sentences;
  std::vector<MatchInstance> pool;
  const size_t n = 200;
  for (size_t i = 0; i < n; ++i) sentences.push_back(Tokenize(c.train[i].text));
  for (size_t i = 0; i < n; ++i) {
    MatchInstance m;
    m.doc_id = i + 1;
    m.ctx.sentence = &sentences[i];
    m.ctx.subj = Span{m.doc_id, c.train[i].subj, c.train[i].subj + 1};
    m.ctx.obj = Span{m.doc_id, c.train[i].obj, c.train[i].obj + 1};
    pool.push_back(m);
  }
  std::vector<RuleForm> forms;
  for (const CueFamily &f : CueFamilies()) {
    forms.push_back({f.label, Parse(BetweenExplanation(f.words[0]), TaskKind::kRelationExtraction, f.label)});
  }
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int accept_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = u(rng), b = u(rng), floor = u(rng);
    auto high = WeakLabelCorpus(forms, pool, TaskKind::kRelationExtraction, {std::max(a, b), floor}, c.embeddings);
    auto low = WeakLabelCorpus(forms, pool, TaskKind::kRelationExtraction, {std::min(a, b), floor}, c.embeddings);
    std::set<DocId> low_ids;
    for (const Annotation &x : low) low_ids.insert(x.doc_id);
    for (const Annotation &x : high) accept_violations += low_ids.count(x.doc_id) == 0;
  }

  auto ex = ToyTriggers();
  std::set<std::string> vocab;
  for (const auto &e : ex) vocab.insert(e.sentence.begin(), e.sentence.end());
  TriggerModel m({"POS", "NEG"}, {vocab.begin(), vocab.end()}, nullptr, TriggerConfig{});
  m.Train(ex);
  auto table = m.BuildTable(ex);
  int trigger_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = 3.0 * u(rng), b = 3.0 * u(rng);
    const auto &sentence = ex[rng() % ex.size()].sentence;
    m.set_threshold(std::min(a, b));
    auto tight = m.SoftMatch(sentence, table);
    m.set_threshold(std::max(a, b));
    auto loose = m.SoftMatch(sentence, table);
    std::set<std::string> ids;
    for (const auto &x : loose) ids.insert(x.entry->id);
    for (const auto &x : tight) trigger_violations += ids.count(x.entry->id) == 0;
  }
  return {accept_violations == 0 && trigger_violations == 0,
          "100 accept pairs: " + std::to_string(accept_violations) + " violations; 100 similarity pairs: " +
              std::to_string(trigger_violations) + " violations"};
}

// ---------------------------------------------------------------------------
// Export and log round trips.

Outcome RoundTrips() {
  testing::TempDir tmp;
  auto session = testing::MakeSession();
  ProjectStore store = ProjectStore::Create(tmp.path() / "p", "p", SchemaFromJson(session.schema));
  ImportCorpus(store, session.import_json, ImportFormat::kJson);
  for (const json &req : session.annotations) {
    Annotation a;
    a.doc_id = req["doc_id"];
    a.kind = AnnotationKind::kRelation;
    a.span = Span{a.doc_id, req["span"]["start"], req["span"]["end"]};
    a.span2 = Span{a.doc_id, req["span2"]["start"], req["span2"]["end"]};
    a.label = req["label"];
    Explanation e;
    e.variant = ExplanationVariant::kNaturalLanguage;
    e.nl_text = req["explanation"]["nl_text"];
    e.parsed_form = Parse(e.nl_text, TaskKind::kRelationExtraction, a.label);
    a.explanation = e;
    store.AddAnnotation(a);
  }
  Annotation weak = store.state().annotations.begin()->second;
  weak.id = 0;
  weak.doc_id = 20;
  weak.span = Span{20, 1, 2};
  weak.span2 = Span{20, 6, 9};
  weak.explanation.reset();
  weak.source = Source::kWeak;
  weak.provenance = Provenance{"rule", "a1", 0.97};
  store.AddAnnotation(weak);

  const std::string first = ExportJson(store.state(), {true});
  ProjectStore copy = ProjectStore::InMemory("p", store.state().schema);
  ImportCorpus(copy, first, ImportFormat::kJson);
  const std::string second = ExportJson(copy.state(), {true});
  const bool json_ok = first == second;

  const size_t csv_rows = ParseCsv(ExportCsv(store.state(), {true})).size() - 1;  // less the header
  const size_t annotations = store.state().annotations.size();

  store.Compact();
  store.AddDocument("A document added after compaction");
  ProjectStore reopened = ProjectStore::Open(tmp.path() / "p");
  const bool replay_ok = reopened.state() == store.state() && Replay(store.events()) == store.state();

  return {json_ok && csv_rows == annotations && replay_ok,
          std::string("JSON export/import/export ") + (json_ok ? "byte-identical" : "differs") + " (" +
              std::to_string(first.size()) + " bytes); CSV rows " + std::to_string(csv_rows) +
              " for " + std::to_string(annotations) + " annotations; replay " +
              (replay_ok ? "reproduces state" : "differs")};
}

// ---------------------------------------------------------------------------
// Scripted HTTP session.

Outcome ServiceIntegration() {
  ServiceConfig config;
  config.data_dir.clear();
  config.retrain_batch = 5;
  config.worker_poll_seconds = 0.02;
  ProjectRegistry registry(config, nullptr);
  httplib::Server server;
  MountApi(server, registry);
  const int port = server.bind_to_any_port("127.0.0.1");
  if (port <= 0) return {false, "cannot bind a port"};
  std::thread listener([&server] { server.listen_after_bind(); });
  server.wait_until_ready();
  registry.StartWorker();
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(30, 0);

  auto session = testing::MakeSession();
  std::string problem;
  auto post = [&](const std::string &path, const json &body, int want) {
    auto r = client.Post(path, body.dump(), "application/json");
    if (!r || r->status != want) {
      if (problem.empty()) problem = path + " -> " + (r ? std::to_string(r->status) + " " + r->body : "no response");
      return json();
    }
    return json::parse(r->body);
  };
  post("/projects", {{"name", "session"}, {"schema", session.schema}}, 201);
  json imported = post("/projects/session/documents", {{"format", "json"}, {"payload", session.import_json}}, 200);
  for (const json &a : session.annotations) post("/projects/session/annotations", a, 201);

  json status;
  const auto deadline = Clock::now() + std::chrono::seconds(30);
  while (Clock::now() < deadline) {
    auto r = client.Get("/projects/session/training_status");
    if (r && r->status == 200) {
      status = json::parse(r->body);
      if (status["snapshot_version"].get<uint64_t>() >= 1 && status["queue_depth"] == 0 &&
          !status["training"].get<bool>()) {
        break;
      }
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  registry.StopWorker();
  server.stop();
  listener.join();

  const uint64_t version = status.is_object() ? status["snapshot_version"].get<uint64_t>() : 0;
  const size_t weak = status.is_object() ? status["weak_labels"].get<size_t>() : 0;
  const size_t docs = imported.is_object() ? imported["added"].get<size_t>() : 0;
  Outcome o;
  o.pass = problem.empty() && docs == 20 && version >= 1 && weak >= 1;
  o.detail = "imported " + std::to_string(docs) + " documents, " +
             std::to_string(session.annotations.size()) + " explained annotations; snapshot version " +
             std::to_string(version) + ", weak labels " + std::to_string(weak);
  if (!problem.empty()) o.detail += "; " + problem;
  return o;
}

}  // namespace
}  // namespace weaklab::acceptance

int main() {
  using namespace weaklab::acceptance;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"label efficiency", LabelEfficiency},
      {"strict-match degeneracy", StrictDegeneracy},
      {"parser golden corpus", ParserGolden},
      {"decoder exactness", DecoderExactness},
      {"gradient checks", GradientChecks},
      {"trigger separation", TriggerSeparation},
      {"monotonicity", Monotonicity},
      {"round trips", RoundTrips},
      {"service integration", ServiceIntegration},
  };
  int failed = 0;
  for (const auto &[name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (checks.size() - static_cast<size_t>(failed)) << "/" << checks.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
