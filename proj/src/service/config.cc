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


#include "weaklab/service/config.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "weaklab/core/error.h"

namespace weaklab {

nlohmann::json ServiceConfig::ToJson() const {
  return {{"host", host},
          {"port", port},
          {"data_dir", data_dir},
          {"embeddings_path", embeddings_path},
          {"retrain_batch", retrain_batch},
          {"retrain_seconds", retrain_seconds},
          {"worker_poll_seconds", worker_poll_seconds},
          {"next_batch_size", next_batch_size},
          {"classifier_buckets", classifier_buckets},
          {"thresholds",
           {{"accept", thresholds.accept}, {"phrase_sim_floor", thresholds.phrase_sim_floor}}},
          {"recommender", recommender.ToJson()},
          {"trigger", trigger.ToJson()}};
}

ServiceConfig ServiceConfig::FromJson(const nlohmann::json &j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  ServiceConfig c;
  try {
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.data_dir = j.value("data_dir", c.data_dir);
    c.embeddings_path = j.value("embeddings_path", c.embeddings_path);
    c.retrain_batch = j.value("retrain_batch", c.retrain_batch);
    c.retrain_seconds = j.value("retrain_seconds", c.retrain_seconds);
    c.worker_poll_seconds = j.value("worker_poll_seconds", c.worker_poll_seconds);
    c.next_batch_size = j.value("next_batch_size", c.next_batch_size);
    c.classifier_buckets = j.value("classifier_buckets", c.classifier_buckets);
    if (j.contains("thresholds")) {
      const auto &t = j.at("thresholds");
      c.thresholds.accept = t.value("accept", c.thresholds.accept);
      c.thresholds.phrase_sim_floor = t.value("phrase_sim_floor", c.thresholds.phrase_sim_floor);
    }
    if (j.contains("recommender")) c.recommender = RecommenderConfig::FromJson(j.at("recommender"));
    if (j.contains("trigger")) c.trigger = TriggerConfig::FromJson(j.at("trigger"));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad config: ") + e.what());
  }
  c.thresholds.Check();
  if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::kInvalidArgument, "port out of range");
  if (c.retrain_batch == 0) throw Error(ErrorCode::kInvalidArgument, "retrain_batch must be positive");
  if (c.classifier_buckets == 0) throw Error(ErrorCode::kInvalidArgument, "classifier_buckets must be positive");
  return c;
}

std::optional<std::string> GetEnv(const std::string &name) {
  const char *v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

ServiceConfig LoadConfig(const std::string &path, const EnvLookup &env) {
  ServiceConfig c;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error &e) {
      throw Error(ErrorCode::kInvalidArgument, "config is not valid JSON: " + std::string(e.what()));
    }
    c = ServiceConfig::FromJson(j);
  }
  if (auto port = env("WEAKLAB_PORT")) {
    try {
      size_t used = 0;
      int p = std::stoi(*port, &used);
      if (used != port->size() || p < 0 || p > 65535) throw std::out_of_range("port");
      c.port = p;
    } catch (const std::exception &) {
      throw Error(ErrorCode::kInvalidArgument, "WEAKLAB_PORT is not a port number: " + *port);
    }
  }
  if (auto dir = env("WEAKLAB_DATA_DIR")) c.data_dir = *dir;
  return c;
}

}  // namespace weaklab
