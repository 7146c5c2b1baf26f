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


// Per-project orchestration behind the HTTP API and the CLI.
//
// A pipeline tick parses the natural-language explanations, retrains the
// trigger matcher when triggers exist, weak-labels every document without
// gold annotations, trains the downstream model on gold plus down-weighted
// weak examples and publishes the result as a new snapshot. Serving reads
// the published snapshot and never waits for training.

#ifndef WEAKLAB_SERVICE_ENGINE_H_
#define WEAKLAB_SERVICE_ENGINE_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "weaklab/core/embeddings.h"
#include "weaklab/core/error.h"
#include "weaklab/models/metrics.h"
#include "weaklab/parser/suggest.h"
#include "weaklab/service/config.h"
#include "weaklab/service/snapshot.h"
#include "weaklab/store/export.h"
#include "weaklab/store/project_store.h"

namespace weaklab {

// A rejected submission. `details` carries extra fields for the response
// body, such as the parser's failing token.
class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(std::vector<std::string> violations,
                             nlohmann::json details = nlohmann::json::object());

  const std::vector<std::string> &violations() const { return violations_; }
  const nlohmann::json &details() const { return details_; }

 private:
  std::vector<std::string> violations_;
  nlohmann::json details_;
};

struct PipelineReport {
  bool noop = false;
  size_t gold_annotations = 0;
  size_t parsed_forms = 0;
  size_t trigger_examples = 0;
  size_t weak_rule_labels = 0;
  size_t weak_trigger_labels = 0;
  uint64_t snapshot_version = 0;
  double seconds = 0.0;
  std::vector<std::string> failures;

  size_t weak_labels() const { return weak_rule_labels + weak_trigger_labels; }
  nlohmann::json ToJson() const;
};

struct Recommendation {
  std::optional<Span> span;
  std::optional<Span> span2;
  std::string label;
  double confidence = 0.0;
};

struct RecommendationSet {
  DocId doc_id = 0;
  uint64_t snapshot_version = 0;
  std::vector<Recommendation> items;  // most confident first
  // The label the UI circles: the top item's label.
  std::optional<std::string> recommended_label;

  nlohmann::json ToJson(const Document &doc) const;
};

struct TrainingStatus {
  uint64_t snapshot_version = 0;
  size_t queue_depth = 0;
  bool training = false;
  size_t weak_rule_labels = 0;
  size_t weak_trigger_labels = 0;
  std::optional<PipelineReport> last_report;

  nlohmann::json ToJson() const;
};

struct SubmitResult {
  AnnotationId id = 0;
  bool replayed = false;  // same request id seen before
};

// Trains a snapshot from a state copy. Exposed for the CLI and tests.
// `weak`, when given, receives the weak annotations the model saw.
ModelSnapshot TrainSnapshot(const ProjectState &state, const ServiceConfig &config,
                            const Embeddings &embeddings, uint64_t version,
                            PipelineReport *report, std::vector<Annotation> *weak = nullptr);

// Scores a snapshot on gold records in the JSON export encoding. Entity
// spans are matched exactly; relations and classes are predicted on the
// gold anchors.
EvalReport EvaluateSnapshot(const ModelSnapshot &snapshot, const LabelSchema &schema,
                            const std::vector<ImportRecord> &gold, const ServiceConfig &config,
                            const Embeddings &embeddings);

// Order-sensitive hash of the gold (human) annotations.
uint64_t GoldFingerprint(const ProjectState &state);

class ProjectEngine {
 public:
  ProjectEngine(ProjectStore store, ServiceConfig config,
                std::shared_ptr<const Embeddings> embeddings);

  const std::string &name() const { return name_; }
  const LabelSchema &schema() const { return schema_; }
  ProjectState StateCopy() const;
  std::shared_ptr<const ModelSnapshot> snapshot() const { return snapshots_.Get(); }

  ImportResult Import(std::string_view payload, ImportFormat format);
  std::optional<Document> GetDocument(DocId id) const;
  std::vector<Annotation> AnnotationsFor(DocId id) const;

  // Request body: {"request_id"?, "id"?, "doc_id", "kind", "span"?,
  // "span2"?, "label", "explanation"?} with token offsets. A natural
  // language explanation needs only "nl_text"; it is parsed here. Throws
  // ValidationFailure, Error(kNotFound) or Error(kConflict).
  SubmitResult Submit(const nlohmann::json &request);
  SubmitResult Submit(Annotation annotation, const std::string &request_id = "");
  void Remove(AnnotationId id);

  std::vector<DocId> NextBatch(size_t k) const;
  // For relations, `pair` restricts scoring to one (SUBJ, OBJ) pair.
  RecommendationSet Recommend(DocId id, std::optional<std::pair<Span, Span>> pair = {}) const;
  std::vector<std::string> Suggest(std::string_view text, size_t cursor) const;
  std::string Export(bool csv, bool include_weak) const;

  // Runs the pipeline unless the gold set is unchanged since the current
  // snapshot, in which case it reports a no-op.
  PipelineReport Tick();
  // Ticks when retrain_batch gold changes are pending, or retrain_seconds
  // have passed since the first pending one. Skips if a tick is running.
  std::optional<PipelineReport> MaybeTick(std::chrono::steady_clock::time_point now);
  TrainingStatus Status() const;

 private:
  PipelineReport TickLocked();
  void NotePending();

  const std::string name_;
  const LabelSchema schema_;
  const ServiceConfig config_;
  std::shared_ptr<const Embeddings> embeddings_;
  SnapshotHolder snapshots_;

  mutable std::mutex mu_;  // guards everything below
  ProjectStore store_;
  UsageStats usage_;
  std::map<std::string, AnnotationId> requests_;
  size_t pending_ = 0;
  std::chrono::steady_clock::time_point first_pending_;
  std::optional<PipelineReport> last_report_;
  bool training_ = false;

  std::mutex train_mu_;  // one tick at a time
};

// Projects under <data_dir>/projects/<name>; an empty data_dir keeps
// everything in memory.
class ProjectRegistry {
 public:
  ProjectRegistry(ServiceConfig config, std::shared_ptr<const Embeddings> embeddings);
  ~ProjectRegistry();

  // Throws ValidationFailure for a bad name or schema and Error(kConflict)
  // when the name is taken by another request.
  std::shared_ptr<ProjectEngine> Create(const std::string &name, const LabelSchema &schema,
                                        const std::string &request_id = "");
  std::shared_ptr<ProjectEngine> Find(const std::string &name) const;
  std::vector<std::string> Names() const;
  const ServiceConfig &config() const { return config_; }

  // Background thread applying each project's retrain policy.
  void StartWorker();
  void StopWorker();

 private:
  const ServiceConfig config_;
  std::shared_ptr<const Embeddings> embeddings_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<ProjectEngine>> projects_;
  std::map<std::string, std::string> create_requests_;  // request id -> name

  std::mutex worker_mu_;
  std::condition_variable worker_cv_;
  bool stop_ = false;
  std::thread worker_;
};

// Loads config.embeddings_path, or an empty table when unset.
std::shared_ptr<const Embeddings> LoadServiceEmbeddings(const ServiceConfig &config);

}  // namespace weaklab

#endif  // WEAKLAB_SERVICE_ENGINE_H_
