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


#include "weaklab/service/engine.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "weaklab/core/tokenizer.h"
#include "weaklab/core/validate.h"
#include "weaklab/matcher/weak_labeler.h"
#include "weaklab/models/features.h"
#include "weaklab/models/metrics.h"
#include "weaklab/parser/parser.h"
#include "weaklab/sampler/active_sampler.h"
#include "weaklab/service/candidates.h"
#include "weaklab/store/codec.h"
#include "weaklab/trigger/trigger_labeling.h"

namespace weaklab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const Embeddings *FeatureEmbeddings(const Embeddings &e) { return e.dim() > 0 ? &e : nullptr; }

std::string Join(const std::vector<std::string> &parts) {
  std::string out;
  for (const std::string &p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

// BIO tags for the span annotations of one document. Later spans that
// overlap an earlier one are dropped.
std::vector<std::string> SpansToTags(const Document &doc,
                                     const std::vector<const Annotation *> &anns) {
  std::vector<std::string> tags(doc.tokens().size(), std::string(kOutsideLabel));
  for (const Annotation *a : anns) {
    if (a->kind != AnnotationKind::kSpan || !a->span) continue;
    const Span &s = *a->span;
    if (s.end > tags.size() || s.start >= s.end) continue;
    bool free = true;
    for (size_t i = s.start; i < s.end; ++i) free = free && tags[i] == kOutsideLabel;
    if (!free) continue;
    for (size_t i = s.start; i < s.end; ++i) tags[i] = (i == s.start ? "B-" : "I-") + a->label;
  }
  return tags;
}

InstanceAnchors AnchorsOf(const Annotation &a) {
  InstanceAnchors x;
  if (a.kind == AnnotationKind::kRelation) {
    x.subj = a.span;
    x.obj = a.span2;
  } else {
    x.term = a.span;
  }
  return x;
}

AnnotationKind TaskAnnotationKind(TaskKind task) {
  switch (task) {
    case TaskKind::kSequenceLabeling:
      return AnnotationKind::kSpan;
    case TaskKind::kRelationExtraction:
      return AnnotationKind::kRelation;
    case TaskKind::kSentimentAnalysis:
      return AnnotationKind::kClass;
  }
  return AnnotationKind::kSpan;
}

std::optional<size_t> LabelIndex(const std::vector<std::string> &labels, const std::string &l) {
  auto it = std::find(labels.begin(), labels.end(), l);
  if (it == labels.end()) return std::nullopt;
  return static_cast<size_t>(it - labels.begin());
}

json SpanJson(const Document &doc, const Span &s) {
  json j = {{"start", s.start}, {"end", s.end}};
  if (s.end <= doc.tokens().size() && s.start < s.end) {
    auto r = CharRange(doc, s);
    j["char_start"] = r.first;
    j["char_end"] = r.second;
    j["text"] = doc.text().substr(r.first, r.second - r.first);
  }
  return j;
}

Span ParseApiSpan(const json &j, DocId doc) {
  return Span{doc, j.at("start").get<size_t>(), j.at("end").get<size_t>()};
}

void WriteFileAtomic(const fs::path &path, const std::string &data) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << data;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

// Uncertainty of the current snapshot on one document.
double DocumentUncertainty(const ModelSnapshot &snap, const Document &doc, const Embeddings &emb,
                           size_t buckets) {
  const Embeddings *femb = FeatureEmbeddings(emb);
  if (doc.tokens().empty()) return 0.0;
  if (snap.task == TaskKind::kSequenceLabeling) {
    return SequenceUncertainty(snap.recommender.PredictSequence(TokenFeatures(doc.content, femb)).decoded);
  }
  double best = 0.0;
  for (const MatchInstance &m : CandidateInstances(doc, snap.task)) {
    InstanceAnchors x{m.ctx.subj, m.ctx.obj, m.ctx.term};
    ClassPrediction p = snap.recommender.PredictClass(ClassifierFeatures(doc.content, x, femb, buckets));
    best = std::max(best, ClassUncertainty(p.probabilities));
  }
  return best;
}

}  // namespace

ValidationFailure::ValidationFailure(std::vector<std::string> violations, json details)
    : Error(ErrorCode::kInvalidArgument, Join(violations)),
      violations_(std::move(violations)),
      details_(std::move(details)) {}

json PipelineReport::ToJson() const {
  return {{"noop", noop},
          {"gold_annotations", gold_annotations},
          {"parsed_forms", parsed_forms},
          {"trigger_examples", trigger_examples},
          {"weak_rule_labels", weak_rule_labels},
          {"weak_trigger_labels", weak_trigger_labels},
          {"weak_labels", weak_labels()},
          {"snapshot_version", snapshot_version},
          {"seconds", seconds},
          {"failures", failures}};
}

json RecommendationSet::ToJson(const Document &doc) const {
  json items = json::array();
  for (const Recommendation &r : this->items) {
    json j = {{"label", r.label}, {"confidence", r.confidence}};
    if (r.span) j["span"] = SpanJson(doc, *r.span);
    if (r.span2) j["span2"] = SpanJson(doc, *r.span2);
    items.push_back(j);
  }
  return {{"doc_id", doc_id},
          {"snapshot_version", snapshot_version},
          {"recommendations", items},
          {"recommended_label", recommended_label ? json(*recommended_label) : json(nullptr)}};
}

json TrainingStatus::ToJson() const {
  return {{"snapshot_version", snapshot_version},
          {"queue_depth", queue_depth},
          {"training", training},
          {"weak_rule_labels", weak_rule_labels},
          {"weak_trigger_labels", weak_trigger_labels},
          {"weak_labels", weak_rule_labels + weak_trigger_labels},
          {"last_report", last_report ? last_report->ToJson() : json(nullptr)}};
}

uint64_t GoldFingerprint(const ProjectState &state) {
  std::string all;
  for (const auto &[_, a] : state.annotations) {
    if (a.source == Source::kHuman) all += AnnotationToJson(a).dump() + "\n";
  }
  return Fnv1a(all);
}

ModelSnapshot TrainSnapshot(const ProjectState &state, const ServiceConfig &config,
                            const Embeddings &embeddings, uint64_t version,
                            PipelineReport *report, std::vector<Annotation> *weak_out) {
  const auto start = Clock::now();
  const TaskKind task = state.schema.task;
  const std::vector<std::string> labels = state.schema.ModelLabels();
  const Embeddings *femb = FeatureEmbeddings(embeddings);
  const size_t buckets = config.classifier_buckets;

  ModelSnapshot snap;
  snap.version = version;
  snap.task = task;
  snap.gold_fingerprint = GoldFingerprint(state);

  std::map<DocId, std::vector<const Annotation *>> gold;
  for (const auto &[_, a] : state.annotations) {
    if (a.source == Source::kHuman) gold[a.doc_id].push_back(&a);
  }
  for (const auto &[_, v] : gold) snap.gold_count += v.size();
  report->gold_annotations = snap.gold_count;

  // Explanations to rules.
  std::vector<RuleForm> forms;
  for (const auto &[_, anns] : gold) {
    for (const Annotation *a : anns) {
      if (!a->explanation || a->explanation->variant != ExplanationVariant::kNaturalLanguage) continue;
      try {
        LogicalForm f = a->explanation->parsed_form
                            ? *a->explanation->parsed_form
                            : Parse(a->explanation->nl_text, task, a->label);
        std::vector<std::string> bad = CheckLogicalForm(f);
        if (!bad.empty()) throw Error(ErrorCode::kUnparseableExplanation, bad.front());
        f.label = a->label;
        forms.push_back({"a" + std::to_string(a->id), std::move(f)});
      } catch (const Error &e) {
        report->failures.push_back("explanation of annotation " + std::to_string(a->id) + ": " +
                                   e.what());
      }
    }
  }
  report->parsed_forms = forms.size();

  // Triggers.
  if (task == TaskKind::kSequenceLabeling) {
    std::vector<TriggerExample> examples;
    std::vector<TriggeredSentence> sentences;
    for (const auto &[doc_id, anns] : gold) {
      const Document &doc = state.documents.at(doc_id);
      TriggeredSentence ts{doc.content, SpansToTags(doc, anns), {}, 1.0};
      for (const Annotation *a : anns) {
        if (!a->explanation || a->explanation->variant != ExplanationVariant::kTrigger) continue;
        auto idx = LabelIndex(labels, a->label);
        if (!idx) continue;
        for (const Span &t : a->explanation->trigger_spans) {
          std::vector<std::string> tokens;
          for (size_t i = t.start; i < t.end && i < doc.tokens().size(); ++i) {
            tokens.push_back(doc.tokens()[i].lower);
          }
          if (tokens.empty()) continue;
          examples.push_back({tokens, doc.content.Lowered(), *idx});
          ts.triggers.push_back({tokens, a->label});
        }
      }
      if (!ts.triggers.empty()) sentences.push_back(std::move(ts));
    }
    report->trigger_examples = examples.size();
    if (!examples.empty()) {
      std::set<std::string> vocab;
      for (const auto &[_, d] : state.documents) {
        for (const Token &t : d.tokens()) vocab.insert(t.lower);
      }
      TriggerModel model(labels, {vocab.begin(), vocab.end()}, femb, config.trigger);
      try {
        model.Train(examples);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kDegenerateData) throw;
        report->failures.push_back(std::string("trigger model: ") + e.what() +
                                   "; matching with the untrained encoder");
        model.Calibrate(examples);
      }
      snap.trigger_table = model.BuildTable(examples);
      SequenceLabeler tl(labels);
      tl.Train(TriggerAwareExamples(sentences, model, femb), config.recommender.labeler_epochs,
               config.recommender.seed);
      snap.trigger_model = std::move(model);
      snap.trigger_labeler = std::move(tl);
    }
  }

  // Weak labels over documents without gold.
  std::vector<MatchInstance> pool;
  for (const auto &[id, doc] : state.documents) {
    if (gold.count(id)) continue;
    for (MatchInstance &m : CandidateInstances(doc, task)) pool.push_back(std::move(m));
  }
  std::vector<Annotation> weak;
  if (!forms.empty() && !pool.empty()) {
    try {
      weak = WeakLabelCorpus(forms, pool, task, config.thresholds, embeddings);
    } catch (const Error &e) {
      report->failures.push_back(std::string("rule matching: ") + e.what());
    }
  }
  report->weak_rule_labels = weak.size();
  if (snap.trigger_model) {
    for (const auto &[id, doc] : state.documents) {
      if (gold.count(id)) continue;
      auto vote = TriggerAwareLabels(*snap.trigger_labeler, *snap.trigger_model, snap.trigger_table,
                                     doc.content, femb);
      if (!vote) continue;
      std::vector<Annotation> anns = VoteAnnotations(id, *vote);
      report->weak_trigger_labels += anns.size();
      for (Annotation &a : anns) weak.push_back(std::move(a));
    }
  }
  snap.weak_rule_labels = report->weak_rule_labels;
  snap.weak_trigger_labels = report->weak_trigger_labels;

  // Downstream model.
  const double ww = config.recommender.weak_weight;
  Recommender rec(task, labels, ClassifierDim(buckets, femb), config.recommender);
  if (task == TaskKind::kSequenceLabeling) {
    std::vector<SequenceExample> ex;
    for (const auto &[doc_id, anns] : gold) {
      const Document &doc = state.documents.at(doc_id);
      ex.push_back({TokenFeatures(doc.content, femb), SpansToTags(doc, anns), 1.0});
    }
    std::map<DocId, std::vector<const Annotation *>> weak_by_doc;
    for (const Annotation &a : weak) weak_by_doc[a.doc_id].push_back(&a);
    for (const auto &[doc_id, anns] : weak_by_doc) {
      const Document &doc = state.documents.at(doc_id);
      ex.push_back({TokenFeatures(doc.content, femb), SpansToTags(doc, anns), ww});
    }
    if (!ex.empty()) rec = rec.Retrain(ex);
  } else {
    std::vector<ClassExample> ex;
    const AnnotationKind kind = TaskAnnotationKind(task);
    auto add = [&](const Annotation &a, double w) {
      auto idx = LabelIndex(labels, a.label);
      if (a.kind != kind || !idx) return;
      const Document &doc = state.documents.at(a.doc_id);
      ex.push_back({ClassifierFeatures(doc.content, AnchorsOf(a), femb, buckets), *idx, w});
    };
    for (const auto &[_, anns] : gold) {
      for (const Annotation *a : anns) add(*a, 1.0);
    }
    for (const Annotation &a : weak) add(a, ww);
    if (!ex.empty()) rec = rec.Retrain(ex);
  }
  if (!rec.trained()) report->failures.push_back("downstream model: no usable gold annotations");
  snap.recommender = std::move(rec);
  if (weak_out) *weak_out = std::move(weak);

  report->snapshot_version = version;
  report->seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return snap;
}

EvalReport EvaluateSnapshot(const ModelSnapshot &snap, const LabelSchema &schema,
                            const std::vector<ImportRecord> &gold, const ServiceConfig &config,
                            const Embeddings &embeddings) {
  const std::vector<std::string> labels = schema.ModelLabels();
  const Embeddings *femb = FeatureEmbeddings(embeddings);
  if (!snap.trained()) throw Error(ErrorCode::kInvalidArgument, "snapshot is not trained");
  std::vector<std::vector<LabeledSpan>> gold_spans, pred_spans;
  std::vector<std::string> gold_labels, pred_labels;
  DocId next = 1;
  for (const ImportRecord &r : gold) {
    Document doc;
    doc.id = next++;
    doc.content = Tokenize(r.text);
    doc.meta = r.meta;
    std::vector<Annotation> anns;
    for (const json &j : r.annotations) anns.push_back(AnnotationFromExportJson(j, doc));
    if (snap.task == TaskKind::kSequenceLabeling) {
      std::vector<const Annotation *> ptrs;
      for (const Annotation &a : anns) ptrs.push_back(&a);
      gold_spans.push_back(BioToSpans(SpansToTags(doc, ptrs)));
      pred_spans.push_back(BioToSpans(snap.recommender.PredictSequence(TokenFeatures(doc.content, femb)).tags));
      continue;
    }
    for (const Annotation &a : anns) {
      if (a.kind != TaskAnnotationKind(snap.task)) continue;
      ClassPrediction p = snap.recommender.PredictClass(
          ClassifierFeatures(doc.content, AnchorsOf(a), femb, config.classifier_buckets));
      gold_labels.push_back(a.label);
      pred_labels.push_back(snap.recommender.labels().at(p.label));
    }
  }
  return snap.task == TaskKind::kSequenceLabeling ? EvaluateSpans(gold_spans, pred_spans, labels)
                                                  : EvaluateClassification(gold_labels, pred_labels, labels);
}

ProjectEngine::ProjectEngine(ProjectStore store, ServiceConfig config,
                             std::shared_ptr<const Embeddings> embeddings)
    : name_(store.state().name),
      schema_(store.state().schema),
      config_(std::move(config)),
      embeddings_(embeddings ? std::move(embeddings) : std::make_shared<const Embeddings>()),
      store_(std::move(store)) {
  const ProjectState &s = store_.state();
  for (const auto &[_, a] : s.annotations) {
    if (a.explanation && a.explanation->parsed_form) usage_.Record(*a.explanation->parsed_form);
  }
  // Reload the last published snapshot.
  if (store_.dir() && s.snapshot_meta.is_object() && s.snapshot_meta.contains("path")) {
    fs::path p = *store_.dir() / s.snapshot_meta.at("path").get<std::string>();
    std::ifstream in(p, std::ios::binary);
    if (in) {
      std::stringstream ss;
      ss << in.rdbuf();
      snapshots_.Publish(std::make_shared<const ModelSnapshot>(ModelSnapshot::FromJson(json::parse(ss.str()))));
    }
  }
  auto snap = snapshots_.Get();
  bool has_gold = std::any_of(s.annotations.begin(), s.annotations.end(),
                              [](const auto &kv) { return kv.second.source == Source::kHuman; });
  if (has_gold && (!snap || snap->gold_fingerprint != GoldFingerprint(s))) NotePending();
}

ProjectState ProjectEngine::StateCopy() const {
  std::lock_guard<std::mutex> lock(mu_);
  return store_.state();
}

void ProjectEngine::NotePending() {
  if (pending_ == 0) first_pending_ = Clock::now();
  ++pending_;
}

ImportResult ProjectEngine::Import(std::string_view payload, ImportFormat format) {
  std::lock_guard<std::mutex> lock(mu_);
  ImportResult r = ImportCorpus(store_, payload, format);
  for (size_t i = 0; i < r.annotations_added; ++i) NotePending();
  return r;
}

std::optional<Document> ProjectEngine::GetDocument(DocId id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = store_.state().documents.find(id);
  if (it == store_.state().documents.end()) return std::nullopt;
  return it->second;
}

std::vector<Annotation> ProjectEngine::AnnotationsFor(DocId id) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Annotation> out;
  for (const auto &[_, a] : store_.state().annotations) {
    if (a.doc_id == id) out.push_back(a);
  }
  return out;
}

SubmitResult ProjectEngine::Submit(const json &req) {
  if (!req.is_object()) throw ValidationFailure({"annotation must be a JSON object"});
  const std::string request_id = req.value("request_id", "");
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto seen = requests_.find(request_id);
    if (!request_id.empty() && seen != requests_.end()) return {seen->second, true};
  }
  Annotation a;
  try {
    a.id = req.value("id", AnnotationId{0});
    a.doc_id = req.at("doc_id").get<DocId>();
    std::string kind = req.at("kind").get<std::string>();
    auto k = KindFromName(kind);
    if (!k) throw ValidationFailure({"unknown annotation kind '" + kind + "'"});
    a.kind = *k;
    a.label = req.at("label").get<std::string>();
    if (req.contains("source")) {
      auto s = SourceFromName(req.at("source").get<std::string>());
      if (!s) throw ValidationFailure({"unknown source"});
      a.source = *s;
    }
    if (req.contains("span")) a.span = ParseApiSpan(req.at("span"), a.doc_id);
    if (req.contains("span2")) a.span2 = ParseApiSpan(req.at("span2"), a.doc_id);
    if (req.contains("provenance")) {
      const json &p = req.at("provenance");
      a.provenance = Provenance{p.at("kind").get<std::string>(), p.at("id").get<std::string>(),
                                p.value("score", 0.0)};
    }
    if (req.contains("explanation") && !req.at("explanation").is_null()) {
      const json &x = req.at("explanation");
      Explanation e;
      std::string variant = x.at("variant").get<std::string>();
      if (variant == "trigger") {
        e.variant = ExplanationVariant::kTrigger;
        for (const json &t : x.at("trigger_spans")) e.trigger_spans.push_back(ParseApiSpan(t, a.doc_id));
      } else if (variant == "natural_language") {
        e.variant = ExplanationVariant::kNaturalLanguage;
        e.nl_text = x.at("nl_text").get<std::string>();
        try {
          e.parsed_form = Parse(e.nl_text, schema_.task, a.label);
        } catch (const ParseError &pe) {
          throw ValidationFailure({pe.what()}, {{"token", pe.token()}, {"offset", pe.char_offset()}});
        } catch (const Error &pe) {
          throw ValidationFailure({pe.what()});
        }
      } else {
        throw ValidationFailure({"unknown explanation variant '" + variant + "'"});
      }
      a.explanation = std::move(e);
    }
  } catch (const json::exception &e) {
    throw ValidationFailure({std::string("malformed annotation: ") + e.what()});
  }
  return Submit(std::move(a), request_id);
}

SubmitResult ProjectEngine::Submit(Annotation a, const std::string &request_id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto seen = requests_.find(request_id);
  if (!request_id.empty() && seen != requests_.end()) return {seen->second, true};
  const ProjectState &s = store_.state();
  auto doc = s.documents.find(a.doc_id);
  if (doc == s.documents.end()) {
    throw Error(ErrorCode::kNotFound, "unknown document " + std::to_string(a.doc_id));
  }
  if (a.id != 0 && s.annotations.count(a.id)) {
    throw Error(ErrorCode::kConflict, "annotation id " + std::to_string(a.id) + " already exists");
  }
  ValidationResult v = ValidateAnnotation(a, doc->second, schema_);
  if (!v.ok()) throw ValidationFailure(v.violations);
  AnnotationId id = store_.AddAnnotation(a);
  if (!request_id.empty()) requests_[request_id] = id;
  if (a.explanation && a.explanation->parsed_form) usage_.Record(*a.explanation->parsed_form);
  if (a.source == Source::kHuman) NotePending();
  return {id, false};
}

void ProjectEngine::Remove(AnnotationId id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = store_.state().annotations.find(id);
  bool human = it != store_.state().annotations.end() && it->second.source == Source::kHuman;
  store_.RemoveAnnotation(id);
  if (human) NotePending();
}

std::vector<DocId> ProjectEngine::NextBatch(size_t k) const {
  if (k == 0) k = config_.next_batch_size;
  std::vector<DocId> pool;
  std::set<DocId> annotated;
  std::map<DocId, Document> docs;
  {
    std::lock_guard<std::mutex> lock(mu_);
    docs = store_.state().documents;
    for (const auto &[_, a] : store_.state().annotations) {
      if (a.source == Source::kHuman) annotated.insert(a.doc_id);
    }
  }
  for (const auto &[id, _] : docs) pool.push_back(id);
  auto snap = snapshots_.Get();
  UncertaintyFn fn;
  if (snap && snap->trained()) {
    fn = [&](DocId id) {
      return DocumentUncertainty(*snap, docs.at(id), *embeddings_, config_.classifier_buckets);
    };
  }
  return SelectBatch(pool, annotated, k, fn);
}

RecommendationSet ProjectEngine::Recommend(DocId id,
                                           std::optional<std::pair<Span, Span>> pair) const {
  std::optional<Document> doc = GetDocument(id);
  if (!doc) throw Error(ErrorCode::kNotFound, "unknown document " + std::to_string(id));
  RecommendationSet out;
  out.doc_id = id;
  auto snap = snapshots_.Get();
  if (!snap || !snap->trained() || doc->tokens().empty()) return out;
  out.snapshot_version = snap->version;
  const Embeddings *femb = FeatureEmbeddings(*embeddings_);
  const Recommender &rec = snap->recommender;

  if (snap->task == TaskKind::kSequenceLabeling) {
    SequencePrediction p = rec.PredictSequence(TokenFeatures(doc->content, femb));
    for (const LabeledSpan &s : BioToSpans(p.tags)) {
      double c = 0.0;
      for (size_t i = s.start; i < s.end; ++i) c += p.decoded.confidence[i];
      out.items.push_back({Span{id, s.start, s.end}, std::nullopt, s.label,
                           c / static_cast<double>(s.end - s.start)});
    }
  } else {
    std::vector<InstanceAnchors> anchors;
    if (pair) {
      anchors.push_back({pair->first, pair->second, std::nullopt});
    } else {
      for (const MatchInstance &m : CandidateInstances(*doc, snap->task)) {
        anchors.push_back({m.ctx.subj, m.ctx.obj, m.ctx.term});
      }
    }
    for (const InstanceAnchors &x : anchors) {
      ClassPrediction p =
          rec.PredictClass(ClassifierFeatures(doc->content, x, femb, config_.classifier_buckets));
      Recommendation r;
      if (snap->task == TaskKind::kRelationExtraction) {
        r.span = x.subj;
        r.span2 = x.obj;
      } else {
        r.span = x.term;
      }
      r.label = rec.labels().at(p.label);
      r.confidence = p.confidence;
      out.items.push_back(std::move(r));
    }
  }
  std::stable_sort(out.items.begin(), out.items.end(),
                   [](const Recommendation &a, const Recommendation &b) {
                     return a.confidence > b.confidence;
                   });
  if (!out.items.empty()) out.recommended_label = out.items.front().label;
  return out;
}

std::vector<std::string> ProjectEngine::Suggest(std::string_view text, size_t cursor) const {
  UsageStats usage;
  {
    std::lock_guard<std::mutex> lock(mu_);
    usage = usage_;
  }
  return weaklab::Suggest(text, cursor, schema_.task, &usage);
}

std::string ProjectEngine::Export(bool csv, bool include_weak) const {
  std::lock_guard<std::mutex> lock(mu_);
  ExportOptions o{include_weak};
  return csv ? ExportCsv(store_.state(), o) : ExportJson(store_.state(), o);
}

PipelineReport ProjectEngine::Tick() {
  std::lock_guard<std::mutex> train(train_mu_);
  return TickLocked();
}

std::optional<PipelineReport> ProjectEngine::MaybeTick(Clock::time_point now) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto wait = std::chrono::duration<double>(config_.retrain_seconds);
    bool due = pending_ >= config_.retrain_batch || (pending_ > 0 && now - first_pending_ >= wait);
    if (!due) return std::nullopt;
  }
  std::unique_lock<std::mutex> train(train_mu_, std::try_to_lock);
  if (!train.owns_lock()) return std::nullopt;
  return TickLocked();
}

PipelineReport ProjectEngine::TickLocked() {
  ProjectState state;
  {
    std::lock_guard<std::mutex> lock(mu_);
    state = store_.state();
    pending_ = 0;
    training_ = true;
  }
  auto done = [this] {
    std::lock_guard<std::mutex> lock(mu_);
    training_ = false;
  };

  PipelineReport report;
  auto current = snapshots_.Get();
  const uint64_t fp = GoldFingerprint(state);
  bool has_gold = std::any_of(state.annotations.begin(), state.annotations.end(),
                              [](const auto &kv) { return kv.second.source == Source::kHuman; });
  if ((current && current->gold_fingerprint == fp) || (!current && !has_gold)) {
    report.noop = true;
    report.snapshot_version = current ? current->version : 0;
    done();
    return report;
  }

  const uint64_t version = state.snapshot_version + 1;
  ModelSnapshot snap;
  try {
    snap = TrainSnapshot(state, config_, *embeddings_, version, &report);
  } catch (const std::exception &e) {
    report.failures.push_back(std::string("training aborted: ") + e.what());
    report.snapshot_version = current ? current->version : 0;
    std::lock_guard<std::mutex> lock(mu_);
    last_report_ = report;
    training_ = false;
    return report;
  }

  std::lock_guard<std::mutex> lock(mu_);
  json meta = {{"gold_count", snap.gold_count},
               {"weak_rule_labels", snap.weak_rule_labels},
               {"weak_trigger_labels", snap.weak_trigger_labels}};
  if (store_.dir()) {
    std::string rel = "snapshots/v" + std::to_string(version) + ".json";
    WriteFileAtomic(*store_.dir() / rel, snap.ToJson().dump());
    meta["path"] = rel;
  }
  store_.PublishSnapshot(version, meta);
  snapshots_.Publish(std::make_shared<const ModelSnapshot>(std::move(snap)));
  last_report_ = report;
  training_ = false;
  return report;
}

TrainingStatus ProjectEngine::Status() const {
  TrainingStatus s;
  auto snap = snapshots_.Get();
  if (snap) {
    s.snapshot_version = snap->version;
    s.weak_rule_labels = snap->weak_rule_labels;
    s.weak_trigger_labels = snap->weak_trigger_labels;
  }
  std::lock_guard<std::mutex> lock(mu_);
  s.queue_depth = pending_;
  s.training = training_;
  s.last_report = last_report_;
  return s;
}

ProjectRegistry::ProjectRegistry(ServiceConfig config, std::shared_ptr<const Embeddings> embeddings)
    : config_(std::move(config)), embeddings_(std::move(embeddings)) {
  if (config_.data_dir.empty()) return;
  fs::path root = fs::path(config_.data_dir) / "projects";
  if (!fs::exists(root)) return;
  for (const auto &entry : fs::directory_iterator(root)) {
    if (!entry.is_directory() || !fs::exists(entry.path() / "events.jsonl")) continue;
    auto engine = std::make_shared<ProjectEngine>(ProjectStore::Open(entry.path()), config_, embeddings_);
    projects_[engine->name()] = engine;
  }
}

ProjectRegistry::~ProjectRegistry() { StopWorker(); }

std::shared_ptr<ProjectEngine> ProjectRegistry::Create(const std::string &name,
                                                       const LabelSchema &schema,
                                                       const std::string &request_id) {
  static const std::regex kName("[A-Za-z0-9_-]{1,64}");
  std::vector<std::string> bad;
  if (!std::regex_match(name, kName)) bad.push_back("project name must match [A-Za-z0-9_-]{1,64}");
  for (const std::string &v : schema.Check()) bad.push_back(v);
  if (!bad.empty()) throw ValidationFailure(bad);

  std::lock_guard<std::mutex> lock(mu_);
  auto seen = create_requests_.find(request_id);
  if (!request_id.empty() && seen != create_requests_.end() && seen->second == name) {
    return projects_.at(name);
  }
  if (projects_.count(name)) throw Error(ErrorCode::kConflict, "project '" + name + "' exists");
  ProjectStore store = config_.data_dir.empty()
                           ? ProjectStore::InMemory(name, schema)
                           : ProjectStore::Create(fs::path(config_.data_dir) / "projects" / name,
                                                  name, schema);
  auto engine = std::make_shared<ProjectEngine>(std::move(store), config_, embeddings_);
  projects_[name] = engine;
  if (!request_id.empty()) create_requests_[request_id] = name;
  return engine;
}

std::shared_ptr<ProjectEngine> ProjectRegistry::Find(const std::string &name) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = projects_.find(name);
  return it == projects_.end() ? nullptr : it->second;
}

std::vector<std::string> ProjectRegistry::Names() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> out;
  for (const auto &[n, _] : projects_) out.push_back(n);
  return out;
}

void ProjectRegistry::StartWorker() {
  std::lock_guard<std::mutex> lock(worker_mu_);
  if (worker_.joinable()) return;
  stop_ = false;
  worker_ = std::thread([this] {
    std::unique_lock<std::mutex> lk(worker_mu_);
    while (!stop_) {
      lk.unlock();
      std::vector<std::shared_ptr<ProjectEngine>> engines;
      {
        std::lock_guard<std::mutex> lock(mu_);
        for (const auto &[_, e] : projects_) engines.push_back(e);
      }
      for (const auto &e : engines) {
        try {
          e->MaybeTick(Clock::now());
        } catch (const std::exception &) {
          // The report of the failed tick is kept by the engine.
        }
      }
      lk.lock();
      worker_cv_.wait_for(lk, std::chrono::duration<double>(config_.worker_poll_seconds),
                          [this] { return stop_; });
    }
  });
}

void ProjectRegistry::StopWorker() {
  {
    std::lock_guard<std::mutex> lock(worker_mu_);
    stop_ = true;
  }
  worker_cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

std::shared_ptr<const Embeddings> LoadServiceEmbeddings(const ServiceConfig &config) {
  if (config.embeddings_path.empty()) return std::make_shared<const Embeddings>();
  return std::make_shared<const Embeddings>(Embeddings::LoadFile(config.embeddings_path));
}

}  // namespace weaklab
