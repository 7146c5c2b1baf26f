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

#include <chrono>
#include <thread>

#include "httplib.h"
#include "session_fixture.h"
#include "test_util.h"
#include "weaklab/service/candidates.h"
#include "weaklab/service/config.h"
#include "weaklab/service/engine.h"
#include "weaklab/service/http_server.h"
#include "weaklab/store/codec.h"

namespace weaklab {
namespace {

using nlohmann::json;
using testing::MakeSession;
using testing::TempDir;

ServiceConfig MemoryConfig() {
  ServiceConfig c;
  c.data_dir.clear();
  return c;
}

EnvLookup NoEnv() {
  return [](const std::string &) { return std::optional<std::string>(); };
}

Document Doc(const std::string &text, json meta = json::object()) {
  Document d = testing::MakeDoc(1, text);
  for (const auto &[k, v] : meta.items()) d.meta[k] = v.get<std::string>();
  return d;
}

// A relation project loaded with the scripted session.
std::shared_ptr<ProjectEngine> SessionProject(ProjectRegistry &reg, size_t annotated) {
  auto session = MakeSession();
  auto p = reg.Create("session", SchemaFromJson(session.schema));
  p->Import(session.import_json, ImportFormat::kJson);
  for (size_t i = 0; i < annotated; ++i) p->Submit(session.annotations[i]);
  return p;
}

TEST(ConfigTest, DefaultsAndPartialJson) {
  ServiceConfig d;
  EXPECT_EQ(d.port, 8080);
  EXPECT_EQ(d.retrain_batch, 10u);
  ServiceConfig c = ServiceConfig::FromJson({{"port", 9001}, {"retrain_batch", 3}});
  EXPECT_EQ(c.port, 9001);
  EXPECT_EQ(c.retrain_batch, 3u);
  EXPECT_EQ(c.data_dir, d.data_dir);
  EXPECT_EQ(ServiceConfig::FromJson(c.ToJson()).ToJson(), c.ToJson());
  EXPECT_THROW(ServiceConfig::FromJson({{"port", "x"}}), Error);
}

TEST(ConfigTest, EnvironmentOverridesFile) {
  TempDir tmp;
  {
    std::ofstream out(tmp.file("c.json"));
    out << R"({"port": 7000, "data_dir": "from-file", "retrain_seconds": 5})";
  }
  EXPECT_EQ(LoadConfig(tmp.file("c.json"), NoEnv()).port, 7000);
  ServiceConfig c = LoadConfig(tmp.file("c.json"), [](const std::string &k) -> std::optional<std::string> {
    if (k == "WEAKLAB_PORT") return "7100";
    if (k == "WEAKLAB_DATA_DIR") return "/srv/weaklab";
    return std::nullopt;
  });
  EXPECT_EQ(c.port, 7100);
  EXPECT_EQ(c.data_dir, "/srv/weaklab");
  EXPECT_DOUBLE_EQ(c.retrain_seconds, 5.0);
  EXPECT_THROW(LoadConfig("", [](const std::string &k) -> std::optional<std::string> {
                 if (k == "WEAKLAB_PORT") return "eighty";
                 return std::nullopt;
               }),
               Error);
  EXPECT_THROW(LoadConfig(tmp.file("missing.json"), NoEnv()), Error);
}

TEST(CandidatesTest, CapitalizedRuns) {
  Document d = Doc("Tahawwur Hussain Rana who was born in Pakistan");
  EXPECT_EQ(CandidateSpans(d), (std::vector<Span>{{1, 0, 3}, {1, 7, 8}}));
  EXPECT_TRUE(CandidateSpans(Doc("The burst has been caused by water hammer pressure")).empty());
  auto re = CandidateInstances(d, TaskKind::kRelationExtraction);
  ASSERT_EQ(re.size(), 1u);
  EXPECT_EQ(*re[0].ctx.subj, (Span{1, 0, 3}));
  EXPECT_EQ(*re[0].ctx.obj, (Span{1, 7, 8}));
}

TEST(CandidatesTest, MetaEntitiesOverride) {
  Document d = Doc("The burst has been caused by water hammer pressure", {{"entities", "1-2,6-9"}});
  EXPECT_EQ(CandidateSpans(d), (std::vector<Span>{{1, 1, 2}, {1, 6, 9}}));
  EXPECT_FALSE(ParseSpanList("3-2", 1, 9).has_value());
  EXPECT_FALSE(ParseSpanList("1-10", 1, 9).has_value());
  EXPECT_EQ(ParseSpanList(" 0-1 , 2-4", 1, 9)->size(), 2u);
}

TEST(SnapshotTest, HolderKeepsOldReadersValid) {
  SnapshotHolder h;
  EXPECT_EQ(h.Get(), nullptr);
  auto v1 = std::make_shared<ModelSnapshot>();
  v1->version = 1;
  h.Publish(v1);
  auto reader = h.Get();
  auto v2 = std::make_shared<ModelSnapshot>();
  v2->version = 2;
  h.Publish(v2);
  EXPECT_EQ(reader->version, 1u);
  EXPECT_EQ(h.Get()->version, 2u);
}

TEST(EngineTest, RejectsUnknownLabelAndBadExplanation) {
  ProjectRegistry reg(MemoryConfig(), nullptr);
  auto p = SessionProject(reg, 0);
  json req = MakeSession().annotations[0];
  req["label"] = "part-whole";
  try {
    p->Submit(req);
    FAIL();
  } catch (const ValidationFailure &e) {
    ASSERT_FALSE(e.violations().empty());
    EXPECT_NE(e.violations()[0].find("part-whole"), std::string::npos);
  }
  req = MakeSession().annotations[0];
  req["explanation"]["nl_text"] = "the phrase 'caused by' occurs frobnicate SUBJ";
  try {
    p->Submit(req);
    FAIL();
  } catch (const ValidationFailure &e) {
    EXPECT_EQ(e.details().at("token"), "frobnicate");
  }
  req = MakeSession().annotations[0];
  req["doc_id"] = 999;
  try {
    p->Submit(req);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  EXPECT_TRUE(p->AnnotationsFor(1).empty());
}

TEST(EngineTest, RequestIdReplayAndIdConflict) {
  ProjectRegistry reg(MemoryConfig(), nullptr);
  auto p = SessionProject(reg, 0);
  json req = MakeSession().annotations[0];
  SubmitResult first = p->Submit(req);
  SubmitResult again = p->Submit(req);
  EXPECT_FALSE(first.replayed);
  EXPECT_TRUE(again.replayed);
  EXPECT_EQ(first.id, again.id);
  EXPECT_EQ(p->AnnotationsFor(1).size(), 1u);

  json dup = MakeSession().annotations[1];
  dup.erase("request_id");
  dup["id"] = first.id;
  try {
    p->Submit(dup);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
  }
  EXPECT_THROW(reg.Create("session", p->schema(), "other"), Error);
  EXPECT_THROW(reg.Create("bad name!", p->schema()), ValidationFailure);
}

TEST(EngineTest, TickLifecycle) {
  ProjectRegistry reg(MemoryConfig(), nullptr);
  auto p = SessionProject(reg, 0);
  PipelineReport empty = p->Tick();
  EXPECT_TRUE(empty.noop);
  EXPECT_EQ(p->snapshot(), nullptr);

  // Gold without explanations trains the recommender but labels nothing.
  json req = MakeSession().annotations[0];
  req.erase("explanation");
  p->Submit(req);
  PipelineReport r1 = p->Tick();
  EXPECT_FALSE(r1.noop);
  EXPECT_EQ(r1.snapshot_version, 1u);
  EXPECT_EQ(r1.weak_labels(), 0u);
  ASSERT_NE(p->snapshot(), nullptr);
  EXPECT_TRUE(p->snapshot()->trained());

  PipelineReport r2 = p->Tick();
  EXPECT_TRUE(r2.noop);
  EXPECT_EQ(r2.snapshot_version, 1u);
}

TEST(EngineTest, ExplanationsLabelThePool) {
  ProjectRegistry reg(MemoryConfig(), nullptr);
  auto p = SessionProject(reg, 10);
  PipelineReport r = p->Tick();
  EXPECT_TRUE(r.failures.empty()) << r.ToJson().dump();
  EXPECT_EQ(r.gold_annotations, 10u);
  EXPECT_EQ(r.parsed_forms, 10u);
  EXPECT_GE(r.weak_rule_labels, 10u);

  // The water hammer sentence is labeled by the 'caused by' rule.
  const DocId burst = 20;
  ASSERT_EQ(p->GetDocument(burst)->text(), "The burst has been caused by water hammer pressure");
  RecommendationSet rec = p->Recommend(burst);
  ASSERT_FALSE(rec.items.empty());
  EXPECT_EQ(rec.recommended_label, "cause-effect");
  EXPECT_EQ(*rec.items[0].span, (Span{burst, 1, 2}));
  json j = rec.ToJson(*p->GetDocument(burst));
  EXPECT_EQ(j["recommendations"][0]["span2"]["text"], "water hammer pressure");

  EXPECT_EQ(p->Recommend(16).recommended_label, "product-producer");

  // Weak labels stay out of the default export.
  json gold = json::parse(p->Export(false, false));
  json all = json::parse(p->Export(false, true));
  size_t gold_anns = 0, all_anns = 0;
  for (const json &rec_j : gold) gold_anns += rec_j["annotations"].size();
  for (const json &rec_j : all) all_anns += rec_j["annotations"].size();
  EXPECT_EQ(gold_anns, 10u);
  EXPECT_EQ(all_anns, 10u);  // weak labels live in the snapshot, not the log
}

TEST(EngineTest, NextBatchColdStartThenUncertainty) {
  ProjectRegistry reg(MemoryConfig(), nullptr);
  auto p = SessionProject(reg, 0);
  EXPECT_EQ(p->NextBatch(3), (std::vector<DocId>{1, 2, 3}));
  for (size_t i = 0; i < 10; ++i) p->Submit(MakeSession().annotations[i]);
  p->Tick();
  std::vector<DocId> batch = p->NextBatch(0);
  EXPECT_EQ(batch.size(), 10u);
  for (DocId id : batch) EXPECT_GT(id, 10u);
}

TEST(EngineTest, RetrainPolicy) {
  ServiceConfig c = MemoryConfig();
  c.retrain_batch = 3;
  c.retrain_seconds = 30;
  ProjectRegistry reg(c, nullptr);
  auto p = SessionProject(reg, 2);
  auto now = std::chrono::steady_clock::now();
  EXPECT_EQ(p->Status().queue_depth, 2u);
  EXPECT_FALSE(p->MaybeTick(now).has_value());
  EXPECT_TRUE(p->MaybeTick(now + std::chrono::seconds(31)).has_value());
  EXPECT_EQ(p->Status().snapshot_version, 1u);
  EXPECT_EQ(p->Status().queue_depth, 0u);

  for (size_t i = 2; i < 5; ++i) p->Submit(MakeSession().annotations[i]);
  auto r = p->MaybeTick(std::chrono::steady_clock::now());
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->snapshot_version, 2u);
}

TEST(EngineTest, SurvivesRestart) {
  TempDir tmp;
  ServiceConfig c = MemoryConfig();
  c.data_dir = tmp.path().string();
  uint64_t version = 0;
  {
    ProjectRegistry reg(c, nullptr);
    auto p = SessionProject(reg, 10);
    version = p->Tick().snapshot_version;
  }
  ProjectRegistry reg(c, nullptr);
  auto p = reg.Find("session");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->StateCopy().documents.size(), 20u);
  EXPECT_EQ(p->StateCopy().annotations.size(), 10u);
  ASSERT_NE(p->snapshot(), nullptr);
  EXPECT_EQ(p->snapshot()->version, version);
  EXPECT_EQ(p->Status().queue_depth, 0u);
  EXPECT_TRUE(p->Tick().noop);
  EXPECT_EQ(p->Recommend(20).recommended_label, "cause-effect");
}

// Dining sentences with trigger explanations.
struct DiningProject {
  std::shared_ptr<ProjectEngine> engine;
  DocId mcdonalds = 0;
};

DiningProject MakeDining(ProjectRegistry &reg, bool with_locations) {
  LabelSchema schema = SchemaFromJson(
      {{"task", "sequence_labeling"}, {"labels", {"O", "RESTAURANT", "LOC"}}});
  DiningProject out;
  out.engine = reg.Create(with_locations ? "dining" : "dining1", schema);
  const std::vector<std::string> restaurants = {"Subway", "Chipotle", "Wendys", "Nandos"};
  const std::vector<std::string> cities = {"Paris", "Boston", "Denver", "Austin"};
  struct Pattern {
    std::string before, after, label;
    size_t trig_start, trig_end;  // relative to the sentence
  };
  std::vector<Pattern> patterns = {
      {"I had lunch at", "yesterday", "RESTAURANT", 1, 4},
      {"We ate at", ", where the food is great", "RESTAURANT", 5, 8}};
  if (with_locations) {
    patterns.push_back({"She lives in", "now", "LOC", 1, 3});
    patterns.push_back({"We flew to", ", where the weather is cold", "LOC", 5, 8});
  }
  json records = json::array();
  for (const Pattern &pt : patterns) {
    for (const std::string &n : pt.label == "LOC" ? cities : restaurants) {
      records.push_back({{"text", pt.before + " " + n + " " + pt.after}});
    }
  }
  records.push_back({{"text", "I had a dinner at McDonalds, where the food is cheap"}});
  out.engine->Import(records.dump(), ImportFormat::kJson);
  DocId id = 1;
  for (const Pattern &pt : patterns) {
    for (size_t i = 0; i < 4; ++i, ++id) {
      size_t at = pt.label == "LOC" ? 3 : (pt.before == "We ate at" ? 3 : 4);
      json x = {{"variant", "trigger"},
                {"trigger_spans", {{{"start", pt.trig_start}, {"end", pt.trig_end}}}}};
      out.engine->Submit({{"doc_id", id},
                          {"kind", "span"},
                          {"span", {{"start", at}, {"end", at + 1}}},
                          {"label", pt.label},
                          {"explanation", x}});
    }
  }
  out.mcdonalds = id;
  return out;
}

TEST(EngineTest, TriggerMatchingLabelsUnseenRestaurant) {
  // The percentile default only admits sentences as close as the training
  // pairs; a fixed threshold lets paraphrases through.
  ServiceConfig c = MemoryConfig();
  c.trigger.threshold = 0.8;
  ProjectRegistry reg(c, nullptr);
  DiningProject d = MakeDining(reg, true);
  PipelineReport r = d.engine->Tick();
  EXPECT_TRUE(r.failures.empty()) << r.ToJson().dump();
  EXPECT_EQ(r.trigger_examples, 16u);
  EXPECT_GE(r.weak_trigger_labels, 1u);
  ASSERT_TRUE(d.engine->snapshot()->trigger_model.has_value());
  RecommendationSet rec = d.engine->Recommend(d.mcdonalds);
  bool found = false;
  for (const Recommendation &item : rec.items) {
    found = found || (item.label == "RESTAURANT" && item.span == Span{d.mcdonalds, 5, 6});
  }
  EXPECT_TRUE(found) << rec.ToJson(*d.engine->GetDocument(d.mcdonalds)).dump();
}

TEST(EngineTest, SingleTriggerLabelDegradesGracefully) {
  ProjectRegistry reg(MemoryConfig(), nullptr);
  DiningProject d = MakeDining(reg, false);
  PipelineReport r = d.engine->Tick();
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_NE(r.failures[0].find("untrained encoder"), std::string::npos);
  EXPECT_EQ(r.snapshot_version, 1u);
  EXPECT_TRUE(d.engine->snapshot()->trained());
}

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ServiceConfig c = MemoryConfig();
    c.retrain_batch = 5;
    c.worker_poll_seconds = 0.02;
    registry_ = std::make_unique<ProjectRegistry>(c, nullptr);
    MountApi(server_, *registry_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    registry_->StartWorker();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(30, 0);
  }
  void TearDown() override {
    registry_->StopWorker();
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  json Post(const std::string &path, const json &body, int expect) {
    auto r = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(r) << path;
    if (!r) return nullptr;
    EXPECT_EQ(r->status, expect) << path << " " << r->body;
    return json::parse(r->body, nullptr, false);
  }
  json Get(const std::string &path, int expect) {
    auto r = client_->Get(path);
    EXPECT_TRUE(r) << path;
    if (!r) return nullptr;
    EXPECT_EQ(r->status, expect) << path << " " << r->body;
    return json::parse(r->body, nullptr, false);
  }

  httplib::Server server_;
  std::unique_ptr<ProjectRegistry> registry_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpTest, ScriptedSession) {
  auto session = MakeSession();
  Get("/health", 200);
  EXPECT_EQ(Post("/projects", {{"name", "rel"}, {"schema", session.schema}}, 201)["name"], "rel");
  Post("/projects", {{"name", "rel"}, {"schema", session.schema}}, 409);
  json added = Post("/projects/rel/documents", {{"format", "json"}, {"payload", session.import_json}}, 200);
  EXPECT_EQ(added["added"], 20);
  EXPECT_EQ(Post("/projects/rel/documents", {{"format", "json"}, {"payload", session.import_json}}, 200)["duplicates"], 20);

  json batch = Get("/projects/rel/next_batch?k=4", 200);
  EXPECT_EQ(batch["doc_ids"], json({1, 2, 3, 4}));

  for (const json &a : session.annotations) {
    EXPECT_EQ(Post("/projects/rel/annotations", a, 201)["replayed"], false);
  }
  EXPECT_EQ(Post("/projects/rel/annotations", session.annotations[0], 200)["replayed"], true);

  json status;
  for (int i = 0; i < 600; ++i) {
    status = Get("/projects/rel/training_status", 200);
    if (status["snapshot_version"] >= 1 && status["queue_depth"] == 0 && !status["training"]) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  EXPECT_GE(status["snapshot_version"].get<int>(), 1) << status.dump();
  EXPECT_GE(status["weak_labels"].get<int>(), 1) << status.dump();

  json rec = Get("/projects/rel/recommendations?doc_id=20", 200);
  EXPECT_EQ(rec["recommended_label"], "cause-effect");
  json pair = Get("/projects/rel/recommendations?doc_id=20&subj=1-2&obj=6-9", 200);
  EXPECT_EQ(pair["recommendations"].size(), 1u);

  json sug = Get("/projects/rel/suggest?text=" +
                     httplib::detail::encode_query_param("the phrase 'caused by' occurs "),
                 200);
  bool between = false;
  for (const json &s : sug["suggestions"]) between = between || s == "between SUBJ and OBJ";
  EXPECT_TRUE(between) << sug.dump();

  auto csv = client_->Get("/projects/rel/export?format=csv");
  ASSERT_TRUE(csv);
  EXPECT_EQ(csv->status, 200);
  size_t rows = 0;
  for (size_t pos = 0; (pos = csv->body.find("\r\n", pos)) != std::string::npos; pos += 2) ++rows;
  EXPECT_EQ(rows, 11u);  // header plus the gold annotations

  json doc = Get("/projects/rel/documents/1", 200);
  EXPECT_EQ(doc["annotations"].size(), 1u);
  auto del = client_->Delete("/projects/rel/annotations/" + doc["annotations"][0]["id"].dump());
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 200);
}

TEST_F(HttpTest, ErrorStatuses) {
  auto session = MakeSession();
  Get("/projects/nope/training_status", 404);
  Post("/projects", {{"name", "rel"}, {"schema", {{"task", "relation_extraction"}, {"labels", json::array()}}}}, 400);
  Post("/projects", {{"name", "rel"}, {"schema", session.schema}}, 201);
  Get("/projects/rel/documents/5", 404);
  Get("/projects/rel/documents/abc", 400);
  Get("/projects/rel/export?format=xml", 400);
  Get("/projects/rel/recommendations", 400);

  json bad = Post("/projects/rel/documents", {{"format", "json"}, {"payload", "[{\"text\": \"ok\"},\n3]"}}, 400);
  EXPECT_EQ(bad["line"], 2);
  Post("/projects/rel/documents", {{"format", "json"}, {"payload", session.import_json}}, 200);

  json a = session.annotations[0];
  a["label"] = "part-whole";
  json v = Post("/projects/rel/annotations", a, 400);
  ASSERT_TRUE(v["violations"].is_array());
  EXPECT_NE(v["violations"][0].get<std::string>().find("part-whole"), std::string::npos);

  a = session.annotations[0];
  a["explanation"]["nl_text"] = "the phrase 'caused by' zzz";
  EXPECT_EQ(Post("/projects/rel/annotations", a, 400)["token"], "zzz");

  auto r = client_->Post("/projects/rel/annotations", "{not json", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);

  json ok = Post("/projects/rel/annotations", session.annotations[0], 201);
  json dup = session.annotations[1];
  dup.erase("request_id");
  dup["id"] = ok["id"];
  Post("/projects/rel/annotations", dup, 409);
  auto del = client_->Delete("/projects/rel/annotations/999");
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 404);
  EXPECT_EQ(Get("/projects/rel/next_batch?k=0", 200)["doc_ids"].size(), 10u);
}

}  // namespace
}  // namespace weaklab
