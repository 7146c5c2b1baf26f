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


// Service configuration: one JSON file plus environment overrides for the
// port (WEAKLAB_PORT) and data directory (WEAKLAB_DATA_DIR).

#ifndef WEAKLAB_SERVICE_CONFIG_H_
#define WEAKLAB_SERVICE_CONFIG_H_

#include <functional>
#include <optional>
#include <string>

#include "json.hpp"
#include "weaklab/matcher/soft_matcher.h"
#include "weaklab/models/recommender.h"
#include "weaklab/trigger/trigger_model.h"

namespace weaklab {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "weaklab-data";
  std::string embeddings_path;  // optional word vectors
  // Retrain after this many new gold annotations, or after retrain_seconds
  // with at least one pending.
  size_t retrain_batch = 10;
  double retrain_seconds = 60.0;
  double worker_poll_seconds = 0.2;
  size_t next_batch_size = 10;
  size_t classifier_buckets = 4096;
  Thresholds thresholds;
  RecommenderConfig recommender;
  TriggerConfig trigger;

  nlohmann::json ToJson() const;
  // Missing keys keep their defaults. Throws Error(kInvalidArgument).
  static ServiceConfig FromJson(const nlohmann::json &j);
};

using EnvLookup = std::function<std::optional<std::string>(const std::string &)>;

// Process environment.
std::optional<std::string> GetEnv(const std::string &name);

// Reads `path` when non-empty, then applies environment overrides.
ServiceConfig LoadConfig(const std::string &path, const EnvLookup &env = GetEnv);

}  // namespace weaklab

#endif  // WEAKLAB_SERVICE_CONFIG_H_
