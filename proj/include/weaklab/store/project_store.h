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


// Durable project state as an append-only event log. Every mutation is
// first encoded as an event and then applied through the same code path
// replay uses, so replaying the log rebuilds the state exactly.
//
// On disk: <dir>/events.jsonl, one {"id", "type", "payload"} object per
// line. Compaction replaces the log with a single checkpoint event that
// keeps the last event id, so ids stay strictly increasing.

#ifndef WEAKLAB_STORE_PROJECT_STORE_H_
#define WEAKLAB_STORE_PROJECT_STORE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "weaklab/core/types.h"

namespace weaklab {

struct Event {
  uint64_t id = 0;
  std::string type;
  nlohmann::json payload;
};

struct ProjectState {
  std::string name;
  LabelSchema schema;
  std::map<DocId, Document> documents;
  std::map<AnnotationId, Annotation> annotations;
  std::map<uint64_t, DocId> by_hash;  // text content hash -> document
  DocId next_doc_id = 1;
  AnnotationId next_annotation_id = 1;
  uint64_t snapshot_version = 0;
  nlohmann::json snapshot_meta;
  uint64_t last_event_id = 0;

  nlohmann::json ToJson() const;
  static ProjectState FromJson(const nlohmann::json &j);
  bool operator==(const ProjectState &o) const { return ToJson() == o.ToJson(); }
};

// Applies one event. Throws Error(kSchemaMismatch) for unknown types and
// Error(kInvalidArgument) when ids do not increase.
void ApplyEvent(ProjectState &state, const Event &event);

ProjectState Replay(const std::vector<Event> &events);

// Single writer. Readers take copies of state() under the owner's lock.
class ProjectStore {
 public:
  // Writes a fresh log; throws Error(kConflict) if one exists in `dir`.
  static ProjectStore Create(const std::filesystem::path &dir, const std::string &name,
                             const LabelSchema &schema);
  // Replays <dir>/events.jsonl. Throws Error(kNotFound) or RecordError.
  static ProjectStore Open(const std::filesystem::path &dir);
  // Not backed by a file; for tools and tests.
  static ProjectStore InMemory(const std::string &name, const LabelSchema &schema);

  const ProjectState &state() const { return state_; }
  const std::vector<Event> &events() const { return events_; }
  const std::optional<std::filesystem::path> &dir() const { return dir_; }

  // Returns the new id, or nullopt when the same text is already stored.
  std::optional<DocId> AddDocument(const std::string &text,
                                   const std::map<std::string, std::string> &meta = {});

  // Assigns an id when a.id == 0 and a timestamp when created_at == 0.
  // Throws Error(kConflict) for a taken id, Error(kNotFound) for an unknown
  // document and Error(kInvalidArgument) listing violations.
  AnnotationId AddAnnotation(Annotation a);
  void RemoveAnnotation(AnnotationId id);
  // Attaches or replaces the explanation of an existing annotation.
  void AddExplanation(AnnotationId id, const Explanation &explanation);
  void PublishSnapshot(uint64_t version, const nlohmann::json &meta);

  // Rewrites the log as a single checkpoint. Atomic via rename.
  void Compact();

 private:
  ProjectStore() = default;
  void Commit(const std::string &type, nlohmann::json payload);

  ProjectState state_;
  std::vector<Event> events_;
  std::optional<std::filesystem::path> dir_;
};

// Content hash used for document deduplication.
uint64_t ContentHash(const std::string &text);

}  // namespace weaklab

#endif  // WEAKLAB_STORE_PROJECT_STORE_H_
