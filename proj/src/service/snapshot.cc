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


#include "weaklab/service/snapshot.h"

#include "weaklab/core/error.h"

namespace weaklab {

nlohmann::json ModelSnapshot::ToJson() const {
  nlohmann::json j = {{"format", "weaklab-snapshot"},
                      {"format_version", 1},
                      {"version", version},
                      {"task", std::string(TaskName(task))},
                      {"recommender", recommender.ToJson()},
                      {"gold_fingerprint", gold_fingerprint},
                      {"gold_count", gold_count},
                      {"weak_rule_labels", weak_rule_labels},
                      {"weak_trigger_labels", weak_trigger_labels}};
  if (trigger_model) {
    j["trigger_model"] = trigger_model->ToJson();
    nlohmann::json table = nlohmann::json::array();
    for (const TriggerEntry &e : trigger_table) {
      table.push_back({{"id", e.id}, {"tokens", e.tokens}, {"label", e.label}, {"vector", e.vector}});
    }
    j["trigger_table"] = table;
  }
  if (trigger_labeler) j["trigger_labeler"] = trigger_labeler->ToJson();
  return j;
}

ModelSnapshot ModelSnapshot::FromJson(const nlohmann::json &j) {
  if (j.value("format", "") != "weaklab-snapshot" || j.value("format_version", 0) != 1) {
    throw Error(ErrorCode::kSchemaMismatch, "not a model snapshot (format version 1)");
  }
  ModelSnapshot s;
  s.version = j.at("version").get<uint64_t>();
  auto task = TaskFromName(j.at("task").get<std::string>());
  if (!task) throw Error(ErrorCode::kSchemaMismatch, "unknown task in snapshot");
  s.task = *task;
  s.recommender = Recommender::FromJson(j.at("recommender"));
  s.gold_fingerprint = j.at("gold_fingerprint").get<uint64_t>();
  s.gold_count = j.at("gold_count").get<size_t>();
  s.weak_rule_labels = j.at("weak_rule_labels").get<size_t>();
  s.weak_trigger_labels = j.at("weak_trigger_labels").get<size_t>();
  if (j.contains("trigger_model")) {
    s.trigger_model = TriggerModel::FromJson(j.at("trigger_model"));
    for (const auto &e : j.at("trigger_table")) {
      s.trigger_table.push_back({e.at("id").get<std::string>(),
                                 e.at("tokens").get<std::vector<std::string>>(),
                                 e.at("label").get<size_t>(), e.at("vector").get<Vec>()});
    }
  }
  if (j.contains("trigger_labeler")) s.trigger_labeler = SequenceLabeler::FromJson(j.at("trigger_labeler"));
  return s;
}

}  // namespace weaklab
