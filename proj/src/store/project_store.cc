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


#include "weaklab/store/project_store.h"

#include <chrono>
#include <fstream>

#include "weaklab/core/error.h"
#include "weaklab/core/validate.h"
#include "weaklab/core/vec.h"
#include "weaklab/store/codec.h"

namespace weaklab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char *kLogName = "events.jsonl";

json EventToJson(const Event &e) { return {{"id", e.id}, {"type", e.type}, {"payload", e.payload}}; }

int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void AppendLine(const fs::path &file, const std::string &line) {
  std::ofstream out(file, std::ios::app | std::ios::binary);
  out << line << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot append to " + file.string());
}

void InsertDocument(ProjectState &s, Document d) {
  uint64_t h = ContentHash(d.text());
  s.by_hash.emplace(h, d.id);
  s.next_doc_id = std::max(s.next_doc_id, d.id + 1);
  s.documents[d.id] = std::move(d);
}

}  // namespace

uint64_t ContentHash(const std::string &text) { return Fnv1a(text); }

json ProjectState::ToJson() const {
  json docs = json::array(), anns = json::array();
  for (const auto &[_, d] : documents) docs.push_back(DocumentToJson(d));
  for (const auto &[_, a] : annotations) anns.push_back(AnnotationToJson(a));
  return {{"name", name},
          {"schema", SchemaToJson(schema)},
          {"documents", docs},
          {"annotations", anns},
          {"next_doc_id", next_doc_id},
          {"next_annotation_id", next_annotation_id},
          {"snapshot_version", snapshot_version},
          {"snapshot_meta", snapshot_meta},
          {"last_event_id", last_event_id}};
}

ProjectState ProjectState::FromJson(const json &j) {
  ProjectState s;
  s.name = j.at("name").get<std::string>();
  s.schema = SchemaFromJson(j.at("schema"));
  for (const json &d : j.at("documents")) InsertDocument(s, DocumentFromJson(d));
  for (const json &a : j.at("annotations")) {
    Annotation ann = AnnotationFromJson(a);
    s.annotations[ann.id] = std::move(ann);
  }
  s.next_doc_id = j.at("next_doc_id").get<DocId>();
  s.next_annotation_id = j.at("next_annotation_id").get<AnnotationId>();
  s.snapshot_version = j.at("snapshot_version").get<uint64_t>();
  s.snapshot_meta = j.at("snapshot_meta");
  s.last_event_id = j.at("last_event_id").get<uint64_t>();
  return s;
}

void ApplyEvent(ProjectState &s, const Event &e) {
  if (e.id <= s.last_event_id) {
    throw Error(ErrorCode::kInvalidArgument, "event id " + std::to_string(e.id) +
                                                 " does not follow " +
                                                 std::to_string(s.last_event_id));
  }
  const json &p = e.payload;
  if (e.type == "project_created") {
    s.name = p.at("name").get<std::string>();
    s.schema = SchemaFromJson(p.at("schema"));
  } else if (e.type == "document_added") {
    InsertDocument(s, DocumentFromJson(p));
  } else if (e.type == "annotation_added") {
    Annotation a = AnnotationFromJson(p);
    s.next_annotation_id = std::max(s.next_annotation_id, a.id + 1);
    s.annotations[a.id] = std::move(a);
  } else if (e.type == "annotation_removed") {
    s.annotations.erase(p.at("id").get<AnnotationId>());
  } else if (e.type == "explanation_added") {
    auto it = s.annotations.find(p.at("annotation_id").get<AnnotationId>());
    if (it == s.annotations.end()) throw Error(ErrorCode::kNotFound, "explanation for unknown annotation");
    it->second.explanation = ExplanationFromJson(p.at("explanation"));
  } else if (e.type == "snapshot_published") {
    s.snapshot_version = p.at("version").get<uint64_t>();
    s.snapshot_meta = p.at("meta");
  } else if (e.type == "checkpoint") {
    s = ProjectState::FromJson(p);
  } else {
    throw Error(ErrorCode::kSchemaMismatch, "unknown event type '" + e.type + "'");
  }
  s.last_event_id = e.id;
}

ProjectState Replay(const std::vector<Event> &events) {
  ProjectState s;
  for (const Event &e : events) ApplyEvent(s, e);
  return s;
}

ProjectStore ProjectStore::Create(const fs::path &dir, const std::string &name,
                                  const LabelSchema &schema) {
  fs::create_directories(dir);
  if (fs::exists(dir / kLogName)) {
    throw Error(ErrorCode::kConflict, "project already exists in " + dir.string());
  }
  ProjectStore st;
  st.dir_ = dir;
  st.Commit("project_created", {{"name", name}, {"schema", SchemaToJson(schema)}});
  return st;
}

ProjectStore ProjectStore::Open(const fs::path &dir) {
  std::ifstream in(dir / kLogName, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "no project log in " + dir.string());
  ProjectStore st;
  st.dir_ = dir;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Event e;
    try {
      json j = json::parse(line);
      e.id = j.at("id").get<uint64_t>();
      e.type = j.at("type").get<std::string>();
      e.payload = j.at("payload");
      ApplyEvent(st.state_, e);
    } catch (const RecordError &) {
      throw;
    } catch (const std::exception &ex) {
      throw RecordError(line_no, ex.what());
    }
    st.events_.push_back(std::move(e));
  }
  return st;
}

ProjectStore ProjectStore::InMemory(const std::string &name, const LabelSchema &schema) {
  ProjectStore st;
  st.Commit("project_created", {{"name", name}, {"schema", SchemaToJson(schema)}});
  return st;
}

void ProjectStore::Commit(const std::string &type, json payload) {
  Event e{state_.last_event_id + 1, type, std::move(payload)};
  ProjectState next = state_;
  ApplyEvent(next, e);
  if (dir_) AppendLine(*dir_ / kLogName, EventToJson(e).dump());
  state_ = std::move(next);
  events_.push_back(std::move(e));
}

std::optional<DocId> ProjectStore::AddDocument(const std::string &text,
                                               const std::map<std::string, std::string> &meta) {
  auto it = state_.by_hash.find(ContentHash(text));
  if (it != state_.by_hash.end() && state_.documents.at(it->second).text() == text) {
    return std::nullopt;
  }
  Document d;
  d.id = state_.next_doc_id;
  d.meta = meta;
  // Tokenize here so empty text fails before anything is logged.
  json payload = DocumentToJson(d);
  payload["text"] = text;
  DocumentFromJson(payload);
  Commit("document_added", std::move(payload));
  return d.id;
}

AnnotationId ProjectStore::AddAnnotation(Annotation a) {
  if (a.id == 0) a.id = state_.next_annotation_id;
  if (state_.annotations.count(a.id)) {
    throw Error(ErrorCode::kConflict, "annotation id " + std::to_string(a.id) + " already exists");
  }
  auto doc = state_.documents.find(a.doc_id);
  if (doc == state_.documents.end()) {
    throw Error(ErrorCode::kNotFound, "unknown document " + std::to_string(a.doc_id));
  }
  ValidationResult v = ValidateAnnotation(a, doc->second, state_.schema);
  if (!v.ok()) {
    std::string msg;
    for (const std::string &s : v.violations) msg += (msg.empty() ? "" : "; ") + s;
    throw Error(ErrorCode::kInvalidArgument, msg);
  }
  if (a.created_at == 0) a.created_at = NowMillis();
  Commit("annotation_added", AnnotationToJson(a));
  return a.id;
}

void ProjectStore::RemoveAnnotation(AnnotationId id) {
  if (!state_.annotations.count(id)) {
    throw Error(ErrorCode::kNotFound, "unknown annotation " + std::to_string(id));
  }
  Commit("annotation_removed", {{"id", id}});
}

void ProjectStore::AddExplanation(AnnotationId id, const Explanation &explanation) {
  auto it = state_.annotations.find(id);
  if (it == state_.annotations.end()) {
    throw Error(ErrorCode::kNotFound, "unknown annotation " + std::to_string(id));
  }
  Annotation probe = it->second;
  probe.explanation = explanation;
  ValidationResult v =
      ValidateAnnotation(probe, state_.documents.at(probe.doc_id), state_.schema);
  if (!v.ok()) throw Error(ErrorCode::kInvalidArgument, v.violations.front());
  Commit("explanation_added",
         {{"annotation_id", id}, {"explanation", ExplanationToJson(explanation)}});
}

void ProjectStore::PublishSnapshot(uint64_t version, const json &meta) {
  Commit("snapshot_published", {{"version", version}, {"meta", meta}});
}

void ProjectStore::Compact() {
  Event e{state_.last_event_id + 1, "checkpoint", {}};
  ProjectState next = state_;
  next.last_event_id = e.id;
  // The checkpoint payload is the state as it stands after the event.
  e.payload = next.ToJson();
  next.last_event_id = 0;
  ApplyEvent(next, e);
  if (dir_) {
    fs::path tmp = *dir_ / (std::string(kLogName) + ".tmp");
    {
      std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
      out << EventToJson(e).dump() << '\n';
      out.flush();
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    }
    fs::rename(tmp, *dir_ / kLogName);
  }
  state_ = std::move(next);
  events_ = {std::move(e)};
}

}  // namespace weaklab
