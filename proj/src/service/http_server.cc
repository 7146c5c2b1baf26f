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


#include "weaklab/service/http_server.h"

#include <string>

#include "weaklab/parser/grammar.h"
#include "weaklab/service/candidates.h"
#include "weaklab/store/codec.h"

namespace weaklab {
namespace {

using nlohmann::json;

void Reply(httplib::Response &res, int status, const json &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response &res, int status, const std::string &message) {
  Reply(res, status, {{"error", message}});
}

// Runs `fn`, turning engine exceptions into status codes.
template <typename Fn>
void Guard(httplib::Response &res, Fn &&fn) {
  try {
    fn();
  } catch (const ValidationFailure &e) {
    json body = {{"error", "validation failed"}, {"violations", e.violations()}};
    for (const auto &[k, v] : e.details().items()) body[k] = v;
    Reply(res, 400, body);
  } catch (const RecordError &e) {
    Reply(res, 400, {{"error", e.what()}, {"line", e.line()}});
  } catch (const Error &e) {
    switch (e.code()) {
      case ErrorCode::kNotFound:
        return ReplyError(res, 404, e.what());
      case ErrorCode::kConflict:
        return ReplyError(res, 409, e.what());
      case ErrorCode::kIo:
        return ReplyError(res, 500, e.what());
      default:
        return ReplyError(res, 400, e.what());
    }
  } catch (const json::exception &e) {
    ReplyError(res, 400, std::string("malformed request: ") + e.what());
  } catch (const std::exception &e) {
    ReplyError(res, 500, e.what());
  }
}

json ParseBody(const httplib::Request &req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error &) {
    throw ValidationFailure({"request body is not valid JSON"});
  }
}

std::shared_ptr<ProjectEngine> Project(ProjectRegistry &reg, const httplib::Request &req) {
  const std::string &name = req.path_params.at("project");
  auto p = reg.Find(name);
  if (!p) throw Error(ErrorCode::kNotFound, "unknown project '" + name + "'");
  return p;
}

size_t ParseIndex(const std::string &s, const char *what) {
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(what);
    return static_cast<size_t>(v);
  } catch (const std::exception &) {
    throw ValidationFailure({std::string(what) + " must be a non-negative integer"});
  }
}

json DocumentJson(const Document &doc) {
  json toks = json::array();
  for (const Token &t : doc.tokens()) {
    toks.push_back({{"surface", t.surface}, {"char_start", t.char_start}, {"char_end", t.char_end}});
  }
  return {{"id", doc.id}, {"text", doc.text()}, {"tokens", toks}, {"meta", doc.meta}};
}

bool Truthy(const std::string &v) { return v == "1" || v == "true" || v == "yes"; }

}  // namespace

void MountApi(httplib::Server &server, ProjectRegistry &reg) {
  server.Get("/health", [](const httplib::Request &, httplib::Response &res) {
    Reply(res, 200, {{"ok", true}});
  });

  server.Get("/grammar", [](const httplib::Request &, httplib::Response &res) {
    Reply(res, 200, GrammarToJson());
  });

  server.Get("/projects", [&reg](const httplib::Request &, httplib::Response &res) {
    Reply(res, 200, {{"projects", reg.Names()}});
  });

  server.Post("/projects", [&reg](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] {
      json body = ParseBody(req);
      std::string name = body.at("name").get<std::string>();
      LabelSchema schema;
      try {
        schema = SchemaFromJson(body.at("schema"));
      } catch (const Error &e) {
        throw ValidationFailure({e.what()});
      }
      std::string rid = body.value("request_id", "");
      bool existed = !rid.empty() && reg.Find(name) != nullptr;
      auto p = reg.Create(name, schema, rid);
      Reply(res, existed ? 200 : 201, {{"name", p->name()}, {"schema", SchemaToJson(p->schema())}});
    });
  });

  server.Get("/projects/:project", [&reg](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] {
      auto p = Project(reg, req);
      ProjectState s = p->StateCopy();
      Reply(res, 200, {{"name", p->name()},
                       {"schema", SchemaToJson(p->schema())},
                       {"documents", s.documents.size()},
                       {"annotations", s.annotations.size()}});
    });
  });

  server.Post("/projects/:project/documents",
              [&reg](const httplib::Request &req, httplib::Response &res) {
                Guard(res, [&] {
                  auto p = Project(reg, req);
                  json body = ParseBody(req);
                  std::string fmt = body.value("format", "plain");
                  auto format = ImportFormatFromName(fmt);
                  if (!format) throw ValidationFailure({"unknown import format '" + fmt + "'"});
                  ImportResult r = p->Import(body.at("payload").get<std::string>(), *format);
                  Reply(res, 200, {{"added", r.documents_added},
                                   {"duplicates", r.duplicates},
                                   {"annotations_added", r.annotations_added}});
                });
              });

  server.Get("/projects/:project/documents/:doc",
             [&reg](const httplib::Request &req, httplib::Response &res) {
               Guard(res, [&] {
                 auto p = Project(reg, req);
                 DocId id = ParseIndex(req.path_params.at("doc"), "document id");
                 auto doc = p->GetDocument(id);
                 if (!doc) throw Error(ErrorCode::kNotFound, "unknown document");
                 json body = DocumentJson(*doc);
                 body["annotations"] = json::array();
                 for (const Annotation &a : p->AnnotationsFor(id)) {
                   body["annotations"].push_back(AnnotationToJson(a));
                 }
                 Reply(res, 200, body);
               });
             });

  server.Get("/projects/:project/next_batch",
             [&reg](const httplib::Request &req, httplib::Response &res) {
               Guard(res, [&] {
                 auto p = Project(reg, req);
                 size_t k = req.has_param("k") ? ParseIndex(req.get_param_value("k"), "k") : 0;
                 std::vector<DocId> ids;
                 try {
                   ids = p->NextBatch(k);
                 } catch (const Error &e) {
                   if (e.code() != ErrorCode::kEmptyPool) throw;
                 }
                 json docs = json::array();
                 for (DocId id : ids) {
                   if (auto d = p->GetDocument(id)) docs.push_back(DocumentJson(*d));
                 }
                 Reply(res, 200, {{"doc_ids", ids}, {"documents", docs}});
               });
             });

  server.Post("/projects/:project/annotations",
              [&reg](const httplib::Request &req, httplib::Response &res) {
                Guard(res, [&] {
                  auto p = Project(reg, req);
                  SubmitResult r = p->Submit(ParseBody(req));
                  Reply(res, r.replayed ? 200 : 201, {{"id", r.id}, {"replayed", r.replayed}});
                });
              });

  server.Delete("/projects/:project/annotations/:id",
                [&reg](const httplib::Request &req, httplib::Response &res) {
                  Guard(res, [&] {
                    auto p = Project(reg, req);
                    p->Remove(ParseIndex(req.path_params.at("id"), "annotation id"));
                    Reply(res, 200, {{"removed", true}});
                  });
                });

  server.Get("/projects/:project/recommendations",
             [&reg](const httplib::Request &req, httplib::Response &res) {
               Guard(res, [&] {
                 auto p = Project(reg, req);
                 if (!req.has_param("doc_id")) throw ValidationFailure({"doc_id is required"});
                 DocId id = ParseIndex(req.get_param_value("doc_id"), "doc_id");
                 auto doc = p->GetDocument(id);
                 if (!doc) throw Error(ErrorCode::kNotFound, "unknown document");
                 std::optional<std::pair<Span, Span>> pair;
                 if (req.has_param("subj") || req.has_param("obj")) {
                   size_t n = doc->tokens().size();
                   auto s = ParseSpanList(req.get_param_value("subj"), id, n);
                   auto o = ParseSpanList(req.get_param_value("obj"), id, n);
                   if (!s || !o || s->size() != 1 || o->size() != 1) {
                     throw ValidationFailure({"subj and obj must be token spans 'start-end'"});
                   }
                   pair = std::make_pair(s->front(), o->front());
                 }
                 Reply(res, 200, p->Recommend(id, pair).ToJson(*doc));
               });
             });

  server.Get("/projects/:project/suggest",
             [&reg](const httplib::Request &req, httplib::Response &res) {
               Guard(res, [&] {
                 auto p = Project(reg, req);
                 std::string text = req.get_param_value("text");
                 size_t cursor = req.has_param("cursor")
                                     ? ParseIndex(req.get_param_value("cursor"), "cursor")
                                     : text.size();
                 Reply(res, 200, {{"suggestions", p->Suggest(text, cursor)}});
               });
             });

  server.Get("/projects/:project/export",
             [&reg](const httplib::Request &req, httplib::Response &res) {
               Guard(res, [&] {
                 auto p = Project(reg, req);
                 std::string fmt = req.has_param("format") ? req.get_param_value("format") : "json";
                 if (fmt != "json" && fmt != "csv") {
                   throw ValidationFailure({"format must be json or csv"});
                 }
                 bool weak = req.has_param("include_weak") && Truthy(req.get_param_value("include_weak"));
                 res.status = 200;
                 res.set_content(p->Export(fmt == "csv", weak),
                                 fmt == "csv" ? "text/csv; charset=utf-8" : "application/json");
               });
             });

  server.Get("/projects/:project/training_status",
             [&reg](const httplib::Request &req, httplib::Response &res) {
               Guard(res, [&] { Reply(res, 200, Project(reg, req)->Status().ToJson()); });
             });

  server.Post("/projects/:project/tick", [&reg](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] { Reply(res, 200, Project(reg, req)->Tick().ToJson()); });
  });
}

bool Serve(ProjectRegistry &registry, const std::string &host, int port) {
  httplib::Server server;
  MountApi(server, registry);
  registry.StartWorker();
  bool ok = server.listen(host, port);
  registry.StopWorker();
  return ok;
}

}  // namespace weaklab
